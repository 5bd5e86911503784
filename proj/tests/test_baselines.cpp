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

#include "cfmimo/baselines.hpp"
#include "cfmimo/errors.hpp"
#include "fixtures.hpp"

#include <doctest.h>

using namespace cfmimo;
using cfmimo::testing::make_problem;

TEST_SUITE("baselines") {

TEST_CASE("scenario names") {
  for (auto k : {ScenarioKind::full_power_all_serve, ScenarioKind::fractional_power_control,
                 ScenarioKind::power_only, ScenarioKind::association_only, ScenarioKind::joint})
    CHECK(parse_scenario(to_string(k)) == k);
  CHECK(parse_scenario("a") == ScenarioKind::full_power_all_serve);
  CHECK(parse_scenario("b") == ScenarioKind::fractional_power_control);
  CHECK(parse_scenario("c") == ScenarioKind::power_only);
  CHECK(parse_scenario("d") == ScenarioKind::association_only);
  CHECK_THROWS_AS(parse_scenario("e"), ConfigError);
  CHECK_THROWS_AS((Scenario{ScenarioKind::joint, INFINITY}.validate()), ConfigError);
}

TEST_CASE("full power, all serve") {
  const ProblemData data = make_problem(10, 4, 1);
  const SolveResult r = run_scenario({ScenarioKind::full_power_all_serve}, data, {});
  CHECK(r.eta_star == PowerVector::Ones(4));
  CHECK(r.d_binary == AssociationMatrix::Ones(10, 4));
  CHECK(r.iterations == 0);
  CHECK(r.objective_trace.empty());
}

TEST_CASE("fractional power control") {
  LsfcMatrix equal = LsfcMatrix::Constant(4, 3, 1e-9);
  CHECK(fractional_power_control(equal, -0.5).isApprox(PowerVector::Ones(3)));
  const ProblemData data = make_problem(10, 5, 2);
  const PowerVector eta = fractional_power_control(data.channel.beta, -0.5);
  CHECK((eta.array() > 0.0).all());
  CHECK(eta.maxCoeff() == 1.0);
  // The weakest UE transmits at full power under a negative exponent.
  Index weakest = 0, loudest = 0;
  data.channel.beta.colwise().sum().minCoeff(&weakest);
  eta.maxCoeff(&loudest);
  CHECK(weakest == loudest);
  const SolveResult r = run_scenario({ScenarioKind::fractional_power_control}, data, {});
  CHECK(r.iterations == 0);
  CHECK(r.eta_star == eta);
}

TEST_CASE("restricted alternations ascend and respect their fixed blocks") {
  const ProblemData data = make_problem(20, 6, 3);
  const SolveResult c = run_scenario({ScenarioKind::power_only}, data, {});
  CHECK(c.d_binary == AssociationMatrix::Ones(20, 6));
  const SolveResult d = run_scenario({ScenarioKind::association_only}, data, {});
  CHECK(d.eta_star == PowerVector::Ones(6));
  for (const auto* r : {&c, &d}) {
    CHECK(r->iterations >= 1);
    for (std::size_t i = 1; i < r->objective_trace.size(); ++i)
      CHECK(r->objective_trace[i] >=
            r->objective_trace[i - 1] - 1e-9 * std::abs(r->objective_trace[i - 1]));
  }
}

TEST_CASE("joint beats the baselines on a desk drop") {
  const ProblemData data = make_problem(30, 10, 4);
  double joint = 0.0;
  std::vector<double> others;
  for (auto k : {ScenarioKind::full_power_all_serve, ScenarioKind::power_only,
                 ScenarioKind::association_only, ScenarioKind::joint}) {
    const SolveResult r = run_scenario({k}, data, {});
    const double s = spectral_efficiency<double>(r.eta_star, r.d_binary, data.channel, data.params).sum();
    if (k == ScenarioKind::joint)
      joint = s;
    else
      others.push_back(s);
  }
  for (double s : others) CHECK(joint >= s);
}

}
