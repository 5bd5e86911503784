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
#include "cfmimo/oracle.hpp"
#include "fixtures.hpp"

#include <doctest.h>

using namespace cfmimo;

namespace {

MatrixX<double> closed_gamma(const LsfcMatrix& beta, const PilotAssignment& p) {
  return estimation_quality<double>(beta, pilot_gram(p), p.p_p, p.pilot_length);
}

int count_within(const std::vector<ComparisonRow>& rows, double sigmas) {
  int n = 0;
  for (const auto& r : rows) n += r.within(sigmas) ? 1 : 0;
  return n;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("zero channel gives zero estimate") {
  LsfcMatrix beta(2, 1);
  beta << 0.0, 1.0;
  const PilotAssignment p{{0}, 1, 4.0};
  const EstimateStats s = sample_estimates(beta, p, 2, 1000, 1);
  CHECK(s.gamma_hat(0, 0) == 0.0);
  CHECK(s.gamma_hat(1, 0) > 0.0);
}

TEST_CASE("single UE estimate quality") {
  const LsfcMatrix beta = LsfcMatrix::Constant(1, 1, 0.8);
  const PilotAssignment p{{0}, 1, 2.5};
  const EstimateStats s = sample_estimates(beta, p, 1, 100000, 3);
  const double closed = closed_gamma(beta, p)(0, 0);
  CHECK(std::abs(s.gamma_hat(0, 0) - closed) <= 3.0 * s.gamma_stderr(0, 0));
  CHECK(std::abs(s.orthogonality(0, 0)) <= 3.0 * s.orthogonality_stderr(0, 0));
}

TEST_CASE("co-pilot contamination is visible in the estimates") {
  LsfcMatrix beta(1, 2);
  beta << 1.0, 1.0;
  const PilotAssignment p{{0, 0}, 1, 10.0};
  const EstimateStats s = sample_estimates(beta, p, 2, 100000, 4);
  for (Index t = 0; t < 2; ++t) {
    CHECK(std::abs(s.gamma_hat(0, t) - 10.0 / 21.0) <= 3.0 * s.gamma_stderr(0, t));
    CHECK(std::abs(s.orthogonality(0, t)) <= 3.0 * s.orthogonality_stderr(0, t));
  }
}

TEST_CASE("silent UE has no signal") {
  const auto cfg = cfmimo::testing::small_config(4, 3, 2, 2, 5);
  const DropInstance inst = generate_drop(cfg, 0);
  SystemParams params = cfg.system_params(0.0);
  PowerVector eta = PowerVector::Ones(3);
  eta(1) = 0.0;
  const auto e = empirical_sinr_terms(eta, AssociationMatrix::Ones(4, 3), inst.beta, inst.pilots,
                                      params, 2000, 1);
  CHECK(e.mean.signal(1) == 0.0);
  CHECK(e.mean.noise(1) > 0.0);
  CHECK((e.std_error.noise.array() > 0.0).all());
}

TEST_CASE("terms agree with the closed form") {
  const auto cfg = cfmimo::testing::small_config(4, 3, 2, 2, 6);
  const DropInstance inst = generate_drop(cfg, 0);
  SystemParams params = cfg.system_params(0.0);
  params.antennas = 2;
  AssociationMatrix d = AssociationMatrix::Ones(4, 3);
  d(0, 1) = d(3, 2) = 0.0;
  PowerVector eta(3);
  eta << 0.9, 0.4, 0.7;
  const auto closed = sinr_terms<double>(eta, d, inst.channel, params);
  const auto emp = empirical_sinr_terms(eta, d, inst.beta, inst.pilots, params, 100000, 8);
  const auto rows = compare_terms(closed, emp);
  CHECK(rows.size() == 12);
  CHECK(count_within(rows, 3.0) >= 11);
  CHECK(count_within(rows, 4.5) == 12);
  const auto g = compare_estimates(inst.channel.gamma,
                                   sample_estimates(inst.beta, inst.pilots, 2, 100000, 9));
  CHECK(count_within(g, 3.0) >= 11);
}

TEST_CASE("antenna scaling") {
  const auto cfg = cfmimo::testing::small_config(4, 3, 2, 2, 7);
  const DropInstance inst = generate_drop(cfg, 0);
  SystemParams p2 = cfg.system_params(0.0), p4 = p2;
  p4.antennas = 4;
  const PowerVector eta = PowerVector::Ones(3);
  const AssociationMatrix d = AssociationMatrix::Ones(4, 3);
  const auto a = empirical_sinr_terms(eta, d, inst.beta, inst.pilots, p2, 40000, 1);
  const auto b = empirical_sinr_terms(eta, d, inst.beta, inst.pilots, p4, 40000, 2);
  for (Index t = 0; t < 3; ++t) {
    CHECK(b.mean.signal(t) / a.mean.signal(t) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(b.mean.noise(t) / a.mean.noise(t) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("input checks") {
  const LsfcMatrix beta = LsfcMatrix::Ones(2, 2);
  const PilotAssignment p{{0, 1}, 2, 1.0};
  SystemParams params;
  params.antennas = 1;
  params.qos = VectorX<double>::Zero(2);
  AssociationMatrix half = AssociationMatrix::Constant(2, 2, 0.5);
  CHECK_THROWS_AS(empirical_sinr_terms(PowerVector::Ones(2), half, beta, p, params, 10, 1),
                  ConfigError);
  AssociationMatrix empty = AssociationMatrix::Ones(2, 2);
  empty.col(0).setZero();
  CHECK_THROWS_AS(empirical_sinr_terms(PowerVector::Ones(2), empty, beta, p, params, 10, 1),
                  DegenerateAssociation);
  CHECK_THROWS_AS(sample_estimates(beta, p, 1, 0, 1), ConfigError);
}

TEST_CASE("comparison table") {
  InterferenceTerms<double> closed;
  closed.signal = VectorX<double>::Constant(1, 2.0);
  closed.pilot_contamination = closed.beamforming_uncertainty = closed.noise = closed.signal;
  EmpiricalTerms emp;
  emp.mean = closed;
  emp.mean.signal(0) = 2.5;
  emp.std_error = closed;
  emp.std_error.signal(0) = 0.25;
  const auto rows = compare_terms(closed, emp);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].term == "signal");
  CHECK(rows[0].z == doctest::Approx(2.0));
  CHECK(rows[1].z == 0.0);
}

}
