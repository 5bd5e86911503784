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
#include "fixtures.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cfmimo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cfmimo_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig tiny_config(const fs::path& out) {
  ExperimentConfig c = cfmimo::testing::small_config(12, 4);
  c.drops = 3;
  c.output_dir = out.string();
  return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("percentile") {
  CHECK(percentile({2.5, 2.5, 2.5}, 0.37) == 2.5);
  CHECK(percentile({0.0, 1.0}, 0.5) == 0.5);
  std::vector<double> grid(100);
  for (int i = 0; i < 100; ++i) grid[static_cast<std::size_t>(i)] = i;
  CHECK(percentile(grid, 0.10) == doctest::Approx(9.9));
  CHECK(percentile(grid, 0.0) == 0.0);
  CHECK(percentile(grid, 1.0) == 99.0);
  CHECK_THROWS_AS(percentile({}, 0.5), ConfigError);
  CHECK_THROWS_AS(percentile({1.0}, 1.5), ConfigError);
}

TEST_CASE("config round trip and strictness") {
  ExperimentConfig c;
  c.alphas = {0.001, 0.003};
  c.scenarios = {ScenarioKind::joint, ScenarioKind::power_only};
  c.solver.epsilon = 1e-3;
  c.network.rng_seed = 99;
  c.pilot_strategy = PilotStrategy::round_robin;
  const std::string text = config_to_json(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.alphas == c.alphas);
  CHECK(back.scenarios == c.scenarios);
  CHECK(back.network.rng_seed == 99u);
  CHECK_THROWS_AS(parse_config(R"({"dropz": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"drops": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"alphas": []})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenarios": ["z"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK(parse_config("{}").drops == 20);
}

TEST_CASE("shipped configs load") {
  const fs::path root = fs::path(CFMIMO_SOURCE_DIR) / "configs";
  const ExperimentConfig desk = load_config((root / "desk.json").string());
  CHECK(desk.network.num_aps == 30);
  CHECK(desk.network.num_ues == 10);
  CHECK(desk.network.antennas_per_ap == 2);
  CHECK(desk.drops == 20);
  const ExperimentConfig full = load_config((root / "full_scale.json").string());
  CHECK(full.network.num_aps == 100);
  CHECK(full.network.num_ues == 40);
  CHECK(full.network.antennas_per_ap == 4);
  CHECK(full.drops == 100);
  ExperimentConfig switched = desk;
  apply_full_scale(switched);
  CHECK(switched.network.num_aps == 100);
}

TEST_CASE("single drop summary equals direct evaluation") {
  ExperimentConfig c = cfmimo::testing::small_config(12, 4);
  c.drops = 1;
  c.scenarios = {ScenarioKind::full_power_all_serve};
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.summaries.size() == 1);
  const ProblemData data = cfmimo::testing::make_problem(c, 0, c.alphas.front());
  const VectorX<double> se = spectral_efficiency<double>(PowerVector::Ones(4),
                                                 AssociationMatrix::Ones(12, 4), data.channel,
                                                 data.params);
  const MetricsSummary& s = r.summaries.front();
  CHECK(s.mean_sum_se == doctest::Approx(se.sum()).epsilon(1e-14));
  CHECK(s.max_fronthaul == doctest::Approx(se.sum()).epsilon(1e-14));
  CHECK(s.objective_value == doctest::Approx(se.sum() - c.alphas.front() * 48).epsilon(1e-14));
  CHECK(s.ninety_likely_se == doctest::Approx(percentile(s.per_ue_se_cdf, 0.1)));
  CHECK(s.rounding_gap == 0.0);
}

TEST_CASE("empty scenario list writes only the config echo") {
  const fs::path dir = scratch("empty");
  ExperimentConfig c = tiny_config(dir);
  c.scenarios.clear();
  emit_results(run_experiment(c), c);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  CHECK(names == std::vector<std::string>{"config_echo.json"});
  fs::remove_all(dir);
}

TEST_CASE("output schemas and counts") {
  const fs::path dir = scratch("schema");
  ExperimentConfig c = tiny_config(dir);
  c.scenarios = {ScenarioKind::full_power_all_serve, ScenarioKind::joint};
  c.dump_matrices = true;
  const ExperimentResult r = run_experiment(c);
  emit_results(r, c);

  const auto summary = lines(dir / "summary.csv");
  CHECK(summary.front() ==
        "scenario,alpha,M,T,drops,mean_sum_se,ninety_likely_se,max_fronthaul,objective,"
        "rounding_gap");
  CHECK(summary.size() == 3);
  const auto cdf = lines(dir / "cdf_joint.csv");
  CHECK(cdf.front() == "drop,alpha,ue,se");
  CHECK(cdf.size() == 1 + 4 * 3);
  CHECK(lines(dir / "trace_joint_0.csv").front() == "iteration,alpha,objective");
  CHECK(!fs::exists(dir / "trace_full_power_all_serve_0.csv"));
  CHECK(lines(dir / "drop_status.csv").size() == 1 + 3 * 2);
  CHECK(read_matrix_csv((dir / "beta_1.csv").string()) == generate_drop(c, 1).beta);

  // mean_sum_se is recomputable from the CDF file.
  double total = 0.0;
  for (std::size_t i = 1; i < cdf.size(); ++i) total += std::stod(cdf[i].substr(cdf[i].rfind(',') + 1));
  CHECK(std::abs(total / 3.0 - r.summary(ScenarioKind::joint, c.alphas.front()).mean_sum_se) <= 1e-9);
  fs::remove_all(dir);
}

TEST_CASE("reruns and thread counts give identical bytes") {
  const fs::path a = scratch("det_a"), b = scratch("det_b"), p = scratch("det_p");
  ExperimentConfig c = tiny_config(a);
  c.scenarios = {ScenarioKind::power_only, ScenarioKind::joint};
  emit_results(run_experiment(c), c);
  c.output_dir = b.string();
  emit_results(run_experiment(c), c);
  c.output_dir = p.string();
  c.threads = 3;
  emit_results(run_experiment(c), c);
  for (const auto& e : fs::directory_iterator(a)) {
    const auto name = e.path().filename();
    if (name == "config_echo.json") continue;
    CHECK(slurp(e.path()) == slurp(b / name));
    CHECK(slurp(e.path()) == slurp(p / name));
  }
  for (const auto& d : {a, b, p}) fs::remove_all(d);
}

TEST_CASE("timing column is opt-in") {
  const fs::path dir = scratch("timing");
  ExperimentConfig c = tiny_config(dir);
  c.drops = 1;
  c.scenarios = {ScenarioKind::joint};
  c.record_timing = true;
  emit_results(run_experiment(c), c);
  CHECK(lines(dir / "trace_joint_0.csv").front() == "iteration,alpha,objective,wall_clock");
  fs::remove_all(dir);
}

TEST_CASE("infeasible drops are flagged, not dropped") {
  ExperimentConfig c = cfmimo::testing::small_config(12, 4);
  c.drops = 2;
  c.qos = 30.0;
  c.scenarios = {ScenarioKind::joint};
  c.solver.qos_infeasible_policy = InfeasiblePolicy::error;
  const ExperimentResult r = run_experiment(c);
  CHECK(r.any_infeasible());
  CHECK(r.outcomes.size() == 2);
  CHECK(r.summaries.front().flagged_drops == 2);
  CHECK(r.summaries.front().drops == 0);
  c.solver.qos_infeasible_policy = InfeasiblePolicy::report_and_continue;
  const ExperimentResult relaxed = run_experiment(c);
  CHECK(!relaxed.any_infeasible());
  CHECK(relaxed.outcomes.front().status == "qos_relaxed");
  CHECK(relaxed.summaries.front().drops == 2);
}

TEST_CASE("matrix csv round trip") {
  const fs::path dir = scratch("matrix");
  fs::create_directories(dir);
  MatrixX<double> m(2, 3);
  m << 1e-13, 0.1, 3.0, -2.5, 1.0 / 3.0, 7e200;
  write_matrix_csv((dir / "m.csv").string(), m);
  CHECK(read_matrix_csv((dir / "m.csv").string()) == m);
  CHECK(format_double(0.1) == "0.1");
  fs::remove_all(dir);
}

}
