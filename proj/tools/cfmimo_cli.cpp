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

#include "cfmimo/csv.hpp"
#include "cfmimo/errors.hpp"
#include "cfmimo/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int validate_oracle(const cfmimo::ExperimentConfig& config) {
  constexpr cfmimo::Index kInstances = 20;
  constexpr cfmimo::Index kSamples = 100000;
  const auto rows = cfmimo::run_oracle_validation(config, kInstances, kSamples);
  std::filesystem::create_directories(config.output_dir);
  const std::string path = (std::filesystem::path(config.output_dir) / "oracle_comparison.csv").string();
  cfmimo::write_comparison_csv(path, rows);

  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& r : rows) {
    auto& [hit, total] = tally[r.term];
    hit += r.within(3.0) ? 1 : 0;
    ++total;
  }
  bool ok = true;
  for (const auto& [term, counts] : tally) {
    const double frac = static_cast<double>(counts.first) / counts.second;
    ok = ok && frac >= 0.95;
    std::cout << term << ": " << counts.first << "/" << counts.second << " within 3 SE\n";
  }
  std::cout << "wrote " << path << "\n";
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint AP-UE association and power control experiments"};
  std::string config_path, scenario_arg, alpha_arg, out_dir;
  int drops = 0;
  std::uint64_t seed = 0;
  bool full_scale = false, oracle = false;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--scenario", scenario_arg, "scenario name, comma list, or 'all'");
  app.add_option("--alpha", alpha_arg, "comma-separated alpha values");
  app.add_option("--drops", drops, "number of drops")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--paper-scale", full_scale, "full-scale network (M=100, T=40, A=4, 100 drops)");
  app.add_flag("--validate-oracle", oracle, "compare closed forms against Monte-Carlo sampling");
  CLI11_PARSE(app, argc, argv);

  try {
    cfmimo::ExperimentConfig config;
    if (!config_path.empty()) config = cfmimo::load_config(config_path);
    if (full_scale) cfmimo::apply_full_scale(config);
    if (!scenario_arg.empty() && scenario_arg != "all") {
      config.scenarios.clear();
      for (const auto& s : split(scenario_arg)) config.scenarios.push_back(cfmimo::parse_scenario(s));
    }
    if (!alpha_arg.empty()) {
      config.alphas.clear();
      for (const auto& a : split(alpha_arg)) {
        try {
          config.alphas.push_back(std::stod(a));
        } catch (const std::exception&) {
          throw cfmimo::ConfigError("bad alpha value: " + a);
        }
      }
    }
    if (drops > 0) config.drops = drops;
    if (*seed_opt) config.network.rng_seed = seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
    config.validate();

    if (oracle) return validate_oracle(config);

    const auto result = cfmimo::run_experiment(config);
    cfmimo::emit_results(result, config);
    for (const auto& s : result.summaries)
      std::cout << cfmimo::to_string(s.scenario) << " alpha=" << cfmimo::format_double(s.alpha)
                << " mean_sum_se=" << s.mean_sum_se << " 90%-likely=" << s.ninety_likely_se
                << " max_fronthaul=" << s.max_fronthaul << " flagged=" << s.flagged_drops << "\n";
    if (result.any_infeasible()) {
      std::cerr << "one or more drops were infeasible\n";
      return 3;
    }
    return 0;
  } catch (const cfmimo::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
