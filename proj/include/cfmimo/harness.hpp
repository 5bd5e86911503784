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

#pragma once

#include "cfmimo/baselines.hpp"
#include "cfmimo/fp_solver.hpp"
#include "cfmimo/oracle.hpp"
#include "cfmimo/pilots.hpp"
#include "cfmimo/topology.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cfmimo {

/// Transmit power and receiver noise used to normalize p_u and p_p.
struct RadioBudget {
  double ue_power_mw = 100.0;
  double pilot_power_mw = 100.0;
  double bandwidth_hz = 20e6;
  double noise_figure_db = 9.0;

  void validate() const;
};

struct ExperimentConfig {
  NetworkConfig network;  // network.rng_seed is the master seed
  PathLossModel path_loss;
  ShadowingModel shadowing;
  RadioBudget radio;
  Index pilot_length = 5;
  Index coherence_length = 200;
  PilotStrategy pilot_strategy = PilotStrategy::random;
  double qos = 0.2;  // bits/s/Hz, same for every UE
  double fpc_exponent = -0.5;
  SolverOptions solver;
  std::vector<ScenarioKind> scenarios{ScenarioKind::full_power_all_serve,
                                      ScenarioKind::fractional_power_control,
                                      ScenarioKind::power_only,
                                      ScenarioKind::association_only, ScenarioKind::joint};
  std::vector<double> alphas{0.001};
  int drops = 20;
  std::string output_dir = "results";
  int threads = 1;
  bool record_timing = false;  // wall-clock column in traces breaks byte-identical reruns
  bool dump_matrices = false;  // beta/gamma CSV per drop

  void validate() const;
  SystemParams system_params(double alpha) const;
  double pilot_snr() const;
};

/// Switches network size and drop count to the full-scale setup
/// (M=100, T=40, A=4, 100 drops); everything else is kept.
void apply_full_scale(ExperimentConfig& config);

/// Reads a JSON configuration; absent keys keep their defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
/// Fully resolved configuration as pretty-printed JSON.
std::string config_to_json(const ExperimentConfig& config);

/// Everything generated for one drop before any optimization.
struct DropInstance {
  Topology topology;
  LsfcMatrix beta;
  PilotAssignment pilots;
  ChannelStats<double> channel;
};

DropInstance generate_drop(const ExperimentConfig& config, Index drop);

/// Outcome of one scenario at one alpha on one drop.
struct DropOutcome {
  Index drop = 0;
  ScenarioKind scenario = ScenarioKind::joint;
  double alpha = 0.0;
  std::string status;  // ok, qos_relaxed, qos_violated, infeasible
  bool has_result = false;
  int iterations = 0;
  VectorX<double> per_ue_se;  // on (eta_star, d_binary)
  double sum_se_relaxed = 0.0;
  double max_fronthaul = 0.0;
  double objective = 0.0;
  std::vector<double> trace;
  std::vector<double> trace_seconds;
};

struct MetricsSummary {
  ScenarioKind scenario = ScenarioKind::joint;
  double alpha = 0.0;
  Index num_aps = 0;
  Index num_ues = 0;
  Index drops = 0;           // drops that produced a result
  Index flagged_drops = 0;   // drops whose status is not ok
  double mean_sum_se = 0.0;
  std::vector<double> per_ue_se_cdf;  // sorted, pooled over drops
  double ninety_likely_se = 0.0;
  double max_fronthaul = 0.0;
  double objective_value = 0.0;
  double rounding_gap = 0.0;
};

struct ExperimentResult {
  std::vector<MetricsSummary> summaries;  // scenario-major, then alpha
  std::vector<DropOutcome> outcomes;      // drop-major, then scenario, then alpha

  const MetricsSummary& summary(ScenarioKind kind, double alpha) const;
  bool any_infeasible() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Aggregates outcomes of one (scenario, alpha) pair.
MetricsSummary summarize(const std::vector<DropOutcome>& outcomes, ScenarioKind kind,
                         double alpha, Index num_aps, Index num_ues);

/// Linear-interpolated q-quantile of sorted samples.
double percentile(const std::vector<double>& sorted, double q);

/// summary.csv, cdf_<scenario>.csv, trace_<scenario>_<drop>.csv,
/// drop_status.csv and config_echo.json under config.output_dir.
void emit_results(const ExperimentResult& result, const ExperimentConfig& config);

/// Oracle comparison on `instances` random small networks built from the
/// config's propagation model; returns every comparison row.
std::vector<ComparisonRow> run_oracle_validation(const ExperimentConfig& config,
                                                 Index instances, Index n_samples,
                                                 Index num_aps = 4, Index num_ues = 3,
                                                 Index antennas = 2, Index pilot_length = 2);

}  // namespace cfmimo
