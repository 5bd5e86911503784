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

#include "cfmimo/errors.hpp"
#include "cfmimo/harness.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace cfmimo {

using nlohmann::json;

void RadioBudget::validate() const {
  if (!(ue_power_mw > 0.0) || !(pilot_power_mw > 0.0))
    throw ConfigError("transmit powers must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (!std::isfinite(noise_figure_db)) throw ConfigError("noise figure must be finite");
}

void ExperimentConfig::validate() const {
  network.validate();
  path_loss.validate();
  shadowing.validate();
  radio.validate();
  solver.validate();
  if (drops < 1) throw ConfigError("drops must be at least 1");
  if (alphas.empty()) throw ConfigError("alphas must be nonempty");
  for (double a : alphas)
    if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("alphas must be finite and >= 0");
  if (!(qos >= 0.0)) throw ConfigError("qos must be nonnegative");
  if (!std::isfinite(fpc_exponent)) throw ConfigError("fpc_exponent must be finite");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (pilot_length < 1 || pilot_length >= coherence_length)
    throw ConfigError("need 1 <= pilot_length < coherence_length");
  system_params(alphas.front()).validate(network.num_ues);
}

SystemParams ExperimentConfig::system_params(double alpha) const {
  SystemParams p;
  p.antennas = network.antennas_per_ap;
  p.p_u = normalized_snr(radio.ue_power_mw, radio.bandwidth_hz, radio.noise_figure_db);
  p.prelog = pilot_overhead_prelog(pilot_length, coherence_length);
  p.alpha = alpha;
  p.qos = VectorX<double>::Constant(network.num_ues, qos);
  p.coherence_length = coherence_length;
  p.pilot_length = pilot_length;
  return p;
}

double ExperimentConfig::pilot_snr() const {
  return normalized_snr(radio.pilot_power_mw, radio.bandwidth_hz, radio.noise_figure_db);
}

void apply_full_scale(ExperimentConfig& config) {
  config.network.num_aps = 100;
  config.network.num_ues = 40;
  config.network.antennas_per_ap = 4;
  config.drops = 100;
}

namespace {

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"network", "propagation", "radio", "pilots", "coherence_length", "qos",
              "fpc_exponent", "solver", "scenarios", "alphas", "drops", "output_dir", "threads",
              "record_timing", "dump_matrices", "derived"});

  ExperimentConfig c;
  if (root.contains("network")) {
    const json& n = root["network"];
    check_keys(n, "network",
               {"area_side", "num_aps", "num_ues", "antennas_per_ap", "seed", "wrap_around"});
    read(n, "area_side", c.network.area_side);
    read(n, "num_aps", c.network.num_aps);
    read(n, "num_ues", c.network.num_ues);
    read(n, "antennas_per_ap", c.network.antennas_per_ap);
    read(n, "seed", c.network.rng_seed);
    read(n, "wrap_around", c.network.wrap_around);
  }
  if (root.contains("propagation")) {
    const json& p = root["propagation"];
    check_keys(p, "propagation",
               {"d0", "d1", "fixed_loss_db", "far_slope", "mid_slope", "near_slope",
                "shadowing_sigma_db", "shadow_beyond_d1"});
    read(p, "d0", c.path_loss.d0);
    read(p, "d1", c.path_loss.d1);
    read(p, "fixed_loss_db", c.path_loss.fixed_loss_db);
    read(p, "far_slope", c.path_loss.far_slope);
    read(p, "mid_slope", c.path_loss.mid_slope);
    read(p, "near_slope", c.path_loss.near_slope);
    read(p, "shadowing_sigma_db", c.shadowing.sigma_db);
    read(p, "shadow_beyond_d1", c.shadowing.apply_beyond_d1);
  }
  if (root.contains("radio")) {
    const json& r = root["radio"];
    check_keys(r, "radio", {"ue_power_mw", "pilot_power_mw", "bandwidth_hz", "noise_figure_db"});
    read(r, "ue_power_mw", c.radio.ue_power_mw);
    read(r, "pilot_power_mw", c.radio.pilot_power_mw);
    read(r, "bandwidth_hz", c.radio.bandwidth_hz);
    read(r, "noise_figure_db", c.radio.noise_figure_db);
  }
  if (root.contains("pilots")) {
    const json& p = root["pilots"];
    check_keys(p, "pilots", {"length", "strategy"});
    read(p, "length", c.pilot_length);
    if (p.contains("strategy")) {
      std::string s;
      read(p, "strategy", s);
      c.pilot_strategy = parse_pilot_strategy(s);
    }
  }
  read(root, "coherence_length", c.coherence_length);
  read(root, "qos", c.qos);
  read(root, "fpc_exponent", c.fpc_exponent);
  if (root.contains("solver")) {
    const json& s = root["solver"];
    check_keys(s, "solver",
               {"epsilon", "max_outer_iters", "inner_tolerance", "rounding_threshold",
                "qos_infeasible_policy", "repair_rounded_qos"});
    read(s, "epsilon", c.solver.epsilon);
    read(s, "max_outer_iters", c.solver.max_outer_iters);
    read(s, "inner_tolerance", c.solver.inner_tolerance);
    read(s, "rounding_threshold", c.solver.rounding_threshold);
    read(s, "repair_rounded_qos", c.solver.repair_rounded_qos);
    if (s.contains("qos_infeasible_policy")) {
      std::string policy;
      read(s, "qos_infeasible_policy", policy);
      c.solver.qos_infeasible_policy = parse_infeasible_policy(policy);
    }
  }
  if (root.contains("scenarios")) {
    std::vector<std::string> names;
    read(root, "scenarios", names);
    c.scenarios.clear();
    for (const auto& n : names) c.scenarios.push_back(parse_scenario(n));
  }
  read(root, "alphas", c.alphas);
  read(root, "drops", c.drops);
  read(root, "output_dir", c.output_dir);
  read(root, "threads", c.threads);
  read(root, "record_timing", c.record_timing);
  read(root, "dump_matrices", c.dump_matrices);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json scenarios = json::array();
  for (auto k : c.scenarios) scenarios.push_back(std::string(to_string(k)));
  const SystemParams p = c.system_params(c.alphas.front());
  json root = {
      {"network",
       {{"area_side", c.network.area_side},
        {"num_aps", c.network.num_aps},
        {"num_ues", c.network.num_ues},
        {"antennas_per_ap", c.network.antennas_per_ap},
        {"seed", c.network.rng_seed},
        {"wrap_around", c.network.wrap_around}}},
      {"propagation",
       {{"d0", c.path_loss.d0},
        {"d1", c.path_loss.d1},
        {"fixed_loss_db", c.path_loss.fixed_loss_db},
        {"far_slope", c.path_loss.far_slope},
        {"mid_slope", c.path_loss.mid_slope},
        {"near_slope", c.path_loss.near_slope},
        {"shadowing_sigma_db", c.shadowing.sigma_db},
        {"shadow_beyond_d1", c.shadowing.apply_beyond_d1}}},
      {"radio",
       {{"ue_power_mw", c.radio.ue_power_mw},
        {"pilot_power_mw", c.radio.pilot_power_mw},
        {"bandwidth_hz", c.radio.bandwidth_hz},
        {"noise_figure_db", c.radio.noise_figure_db}}},
      {"pilots", {{"length", c.pilot_length}, {"strategy", std::string(to_string(c.pilot_strategy))}}},
      {"coherence_length", c.coherence_length},
      {"qos", c.qos},
      {"fpc_exponent", c.fpc_exponent},
      {"solver",
       {{"epsilon", c.solver.epsilon},
        {"max_outer_iters", c.solver.max_outer_iters},
        {"inner_tolerance", c.solver.inner_tolerance},
        {"rounding_threshold", c.solver.rounding_threshold},
        {"qos_infeasible_policy", std::string(to_string(c.solver.qos_infeasible_policy))},
        {"repair_rounded_qos", c.solver.repair_rounded_qos}}},
      {"scenarios", scenarios},
      {"alphas", c.alphas},
      {"drops", c.drops},
      {"output_dir", c.output_dir},
      {"threads", c.threads},
      {"record_timing", c.record_timing},
      {"dump_matrices", c.dump_matrices},
      // Derived values, echoed for reference and ignored on reload.
      {"derived", {{"p_u", p.p_u}, {"p_p", c.pilot_snr()}, {"prelog", p.prelog}}}};
  return root.dump(2) + "\n";
}

}  // namespace cfmimo
