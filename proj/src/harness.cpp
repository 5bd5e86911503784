// cfmimo: joint AP-UE association and power control for uplink cell-free massive MIMO
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cfmimo/harness.hpp"

#include "cfmimo/csv.hpp"
#include "cfmimo/errors.hpp"
#include "cfmimo/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace cfmimo {

namespace {

// Seed streams below one drop seed.
enum Stream : std::uint64_t { kDrop = 0, kTopology = 1, kShadow = 2, kPilots = 3, kOracle = 100 };

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string_view status_of(const SolveResult& r, ScenarioKind kind) {
  if (!enforces_qos(kind)) return "ok";
  if (r.feasibility.qos_relaxed.any()) return "qos_relaxed";
  if (!r.feasibility.qos_met.all()) return "qos_violated";
  return "ok";
}

DropOutcome evaluate_outcome(const SolveResult& r, const ProblemData& data) {
  DropOutcome o;
  o.has_result = true;
  o.iterations = r.iterations;
  o.per_ue_se = spectral_efficiency(r.eta_star, r.d_binary, data.channel, data.params);
  o.sum_se_relaxed =
      spectral_efficiency(r.eta_star, r.d_relaxed, data.channel, data.params).sum();
  o.max_fronthaul = fronthaul_load(r.d_binary, o.per_ue_se).max_load;
  o.objective = o.per_ue_se.sum() - data.params.alpha * r.d_binary.cwiseAbs().sum();
  o.trace = r.objective_trace;
  o.trace_seconds = r.trace_seconds;
  return o;
}

std::vector<DropOutcome> run_drop(const ExperimentConfig& config, Index drop) {
  const DropInstance inst = generate_drop(config, drop);
  std::vector<DropOutcome> out;
  for (ScenarioKind kind : config.scenarios) {
    for (double alpha : config.alphas) {
      const ProblemData data{inst.channel, config.system_params(alpha)};
      DropOutcome o;
      try {
        const SolveResult r = run_scenario(Scenario{kind, config.fpc_exponent}, data,
                                           config.solver);
        o = evaluate_outcome(r, data);
        o.status = status_of(r, kind);
      } catch (const InfeasibleInstance& e) {
        o.status = "infeasible";
        std::cerr << "drop " << drop << " " << to_string(kind) << " alpha "
                  << format_double(alpha) << ": " << e.what() << "\n";
      }
      o.drop = drop;
      o.scenario = kind;
      o.alpha = alpha;
      out.push_back(std::move(o));
    }
  }
  return out;
}

}  // namespace

const MetricsSummary& ExperimentResult::summary(ScenarioKind kind, double alpha) const {
  for (const auto& s : summaries)
    if (s.scenario == kind && s.alpha == alpha) return s;
  throw ConfigError("no summary for scenario " + std::string(to_string(kind)));
}

bool ExperimentResult::any_infeasible() const {
  return std::any_of(outcomes.begin(), outcomes.end(),
                     [](const DropOutcome& o) { return o.status == "infeasible"; });
}

DropInstance generate_drop(const ExperimentConfig& config, Index drop) {
  const std::uint64_t seed =
      derive_seed(config.network.rng_seed, kDrop, static_cast<std::uint64_t>(drop));
  Rng topo_rng(derive_seed(seed, kTopology));
  Rng shadow_rng(derive_seed(seed, kShadow));
  Rng pilot_rng(derive_seed(seed, kPilots));

  DropInstance inst;
  inst.topology = generate_topology(config.network, topo_rng);
  inst.beta = compute_lsfc(inst.topology, config.path_loss, config.shadowing, shadow_rng);
  inst.pilots = assign_pilots(config.network.num_ues, config.pilot_length, config.pilot_snr(),
                              config.pilot_strategy, pilot_rng);
  inst.channel.beta = inst.beta;
  inst.channel.gram = pilot_gram(inst.pilots);
  inst.channel.gamma =
      estimation_quality(inst.beta, inst.channel.gram, inst.pilots.p_p, config.pilot_length);
  return inst;
}

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ConfigError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("percentile level must lie in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

MetricsSummary summarize(const std::vector<DropOutcome>& outcomes, ScenarioKind kind,
                         double alpha, Index num_aps, Index num_ues) {
  MetricsSummary s;
  s.scenario = kind;
  s.alpha = alpha;
  s.num_aps = num_aps;
  s.num_ues = num_ues;
  double sum_se = 0.0, fronthaul = 0.0, objective = 0.0, gap = 0.0;
  for (const auto& o : outcomes) {
    if (o.scenario != kind || o.alpha != alpha) continue;
    if (o.status != "ok") ++s.flagged_drops;
    if (!o.has_result) continue;
    ++s.drops;
    const double total = o.per_ue_se.sum();
    sum_se += total;
    fronthaul += o.max_fronthaul;
    objective += o.objective;
    if (o.sum_se_relaxed > 0.0) gap += std::abs(o.sum_se_relaxed - total) / o.sum_se_relaxed;
    s.per_ue_se_cdf.insert(s.per_ue_se_cdf.end(), o.per_ue_se.begin(), o.per_ue_se.end());
  }
  if (s.drops == 0) return s;
  const double n = static_cast<double>(s.drops);
  s.mean_sum_se = sum_se / n;
  s.max_fronthaul = fronthaul / n;
  s.objective_value = objective / n;
  s.rounding_gap = gap / n;
  std::sort(s.per_ue_se_cdf.begin(), s.per_ue_se_cdf.end());
  s.ninety_likely_se = percentile(s.per_ue_se_cdf, 0.10);
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto drops = static_cast<std::size_t>(config.drops);
  std::vector<std::vector<DropOutcome>> per_drop(drops);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < drops; i = next++) {
      try {
        per_drop[i] = run_drop(config, static_cast<Index>(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.threads), drops);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& d : per_drop)
    for (auto& o : d) result.outcomes.push_back(std::move(o));
  for (ScenarioKind kind : config.scenarios)
    for (double alpha : config.alphas)
      result.summaries.push_back(summarize(result.outcomes, kind, alpha, config.network.num_aps,
                                           config.network.num_ues));
  return result;
}

void emit_results(const ExperimentResult& result, const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  {
    auto out = open_output(dir / "config_echo.json");
    out << config_to_json(config);
  }
  if (result.summaries.empty()) return;

  {
    auto out = open_output(dir / "summary.csv");
    out << "scenario,alpha,M,T,drops,mean_sum_se,ninety_likely_se,max_fronthaul,objective,"
           "rounding_gap\n";
    for (const auto& s : result.summaries)
      out << to_string(s.scenario) << ',' << format_double(s.alpha) << ',' << s.num_aps << ','
          << s.num_ues << ',' << s.drops << ',' << format_double(s.mean_sum_se) << ','
          << format_double(s.ninety_likely_se) << ',' << format_double(s.max_fronthaul) << ','
          << format_double(s.objective_value) << ',' << format_double(s.rounding_gap) << '\n';
  }

  for (ScenarioKind kind : config.scenarios) {
    auto out = open_output(dir / ("cdf_" + std::string(to_string(kind)) + ".csv"));
    out << "drop,alpha,ue,se\n";
    for (const auto& o : result.outcomes) {
      if (o.scenario != kind || !o.has_result) continue;
      for (Index t = 0; t < o.per_ue_se.size(); ++t)
        out << o.drop << ',' << format_double(o.alpha) << ',' << t << ','
            << format_double(o.per_ue_se(t)) << '\n';
    }
  }

  for (ScenarioKind kind : config.scenarios) {
    for (Index drop = 0; drop < config.drops; ++drop) {
      std::vector<const DropOutcome*> rows;
      for (const auto& o : result.outcomes)
        if (o.scenario == kind && o.drop == drop && !o.trace.empty()) rows.push_back(&o);
      if (rows.empty()) continue;
      auto out = open_output(dir / ("trace_" + std::string(to_string(kind)) + "_" +
                                    std::to_string(drop) + ".csv"));
      out << "iteration,alpha,objective" << (config.record_timing ? ",wall_clock" : "") << '\n';
      for (const DropOutcome* o : rows)
        for (std::size_t i = 0; i < o->trace.size(); ++i) {
          out << i + 1 << ',' << format_double(o->alpha) << ',' << format_double(o->trace[i]);
          if (config.record_timing) out << ',' << format_double(o->trace_seconds[i]);
          out << '\n';
        }
    }
  }

  {
    auto out = open_output(dir / "drop_status.csv");
    out << "drop,scenario,alpha,status,iterations\n";
    for (const auto& o : result.outcomes)
      out << o.drop << ',' << to_string(o.scenario) << ',' << format_double(o.alpha) << ','
          << o.status << ',' << o.iterations << '\n';
  }

  if (config.dump_matrices) {
    for (Index drop = 0; drop < config.drops; ++drop) {
      const DropInstance inst = generate_drop(config, drop);
      write_matrix_csv((dir / ("beta_" + std::to_string(drop) + ".csv")).string(), inst.beta);
      write_matrix_csv((dir / ("gamma_" + std::to_string(drop) + ".csv")).string(),
                       inst.channel.gamma);
    }
  }
}

std::vector<ComparisonRow> run_oracle_validation(const ExperimentConfig& config,
                                                 Index instances, Index n_samples,
                                                 Index num_aps, Index num_ues, Index antennas,
                                                 Index pilot_length) {
  std::vector<ComparisonRow> rows;
  for (Index i = 0; i < instances; ++i) {
    const std::uint64_t seed =
        derive_seed(config.network.rng_seed, kOracle, static_cast<std::uint64_t>(i));
    NetworkConfig net = config.network;
    net.num_aps = num_aps;
    net.num_ues = num_ues;
    net.antennas_per_ap = antennas;
    Rng rng(derive_seed(seed, kTopology));
    const Topology topo = generate_topology(net, rng);
    const LsfcMatrix beta = compute_lsfc(topo, config.path_loss, config.shadowing, rng);
    const PilotAssignment pilots =
        assign_pilots(num_ues, pilot_length, config.pilot_snr(), PilotStrategy::random, rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PowerVector eta(num_ues);
    for (Index t = 0; t < num_ues; ++t) eta(t) = 0.1 + 0.9 * unit(rng);
    AssociationMatrix d(num_aps, num_ues);
    for (Index t = 0; t < num_ues; ++t) {
      for (Index m = 0; m < num_aps; ++m) d(m, t) = unit(rng) < 0.6 ? 1.0 : 0.0;
      if (d.col(t).sum() == 0.0) d(static_cast<Index>(unit(rng) * num_aps), t) = 1.0;
    }

    SystemParams params = config.system_params(0.0);
    params.antennas = antennas;
    params.pilot_length = pilot_length;
    params.qos = VectorX<double>::Zero(num_ues);
    ChannelStats<double> ch;
    ch.beta = beta;
    ch.gram = pilot_gram(pilots);
    ch.gamma = estimation_quality(beta, ch.gram, pilots.p_p, pilot_length);

    const std::string prefix = std::to_string(i) + "/";
    auto add = [&](std::vector<ComparisonRow> part) {
      for (auto& r : part) {
        r.index = prefix + r.index;
        rows.push_back(std::move(r));
      }
    };
    add(compare_estimates(ch.gamma,
                          sample_estimates(beta, pilots, antennas, n_samples, derive_seed(seed, 5))));
    add(compare_terms(sinr_terms(eta, d, ch, params),
                      empirical_sinr_terms(eta, d, beta, pilots, params, n_samples,
                                           derive_seed(seed, 6))));
  }
  return rows;
}

}  // namespace cfmimo
