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
#include "cfmimo/pilots.hpp"

#include <doctest.h>

using namespace cfmimo;

TEST_SUITE("pilots") {

TEST_CASE("round robin assignment") {
  Rng rng(1);
  const auto five = assign_pilots(5, 5, 1.0, PilotStrategy::round_robin, rng);
  CHECK(pilot_gram(five) == PilotGram::Identity(5, 5));

  const auto forty = assign_pilots(40, 5, 1.0, PilotStrategy::round_robin, rng);
  std::vector<int> count(5, 0);
  for (Index p : forty.pilot_of) ++count[static_cast<std::size_t>(p)];
  for (int c : count) CHECK(c == 8);

  const auto forced = assign_pilots(2, 1, 1.0, PilotStrategy::random, rng);
  CHECK(forced.pilot_of == std::vector<Index>{0, 0});
}

TEST_CASE("random assignment stays in range and is seeded") {
  Rng a(4), b(4);
  const auto pa = assign_pilots(30, 5, 1.0, PilotStrategy::random, a);
  const auto pb = assign_pilots(30, 5, 1.0, PilotStrategy::random, b);
  CHECK(pa.pilot_of == pb.pilot_of);
  for (Index p : pa.pilot_of) CHECK((p >= 0 && p < 5));
}

TEST_CASE("gram matrix") {
  PilotAssignment same{{0, 0, 0}, 1, 1.0};
  CHECK(pilot_gram(same) == PilotGram::Ones(3, 3));
  PilotAssignment mixed{{0, 0, 1}, 2, 1.0};
  PilotGram expect(3, 3);
  expect << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  CHECK(pilot_gram(mixed) == expect);
  PilotAssignment bad{{0, 3}, 2, 1.0};
  CHECK_THROWS_AS(pilot_gram(bad), ConfigError);
}

TEST_CASE("estimation quality hand values") {
  const MatrixX<double> one = MatrixX<double>::Ones(1, 1);
  CHECK(estimation_quality(one, one, 10.0, 1)(0, 0) == doctest::Approx(10.0 / 11.0));
  CHECK(estimation_quality(one, one, 2.0, 5)(0, 0) == doctest::Approx(10.0 / 11.0));

  const MatrixX<double> beta = MatrixX<double>::Ones(1, 2);
  const MatrixX<double> shared = MatrixX<double>::Ones(2, 2);
  const MatrixX<double> g = estimation_quality(beta, shared, 10.0, 1);
  CHECK(g(0, 0) == doctest::Approx(10.0 / 21.0));
  CHECK(g(0, 1) == doctest::Approx(10.0 / 21.0));

  MatrixX<double> tiny(1, 1);
  tiny << 1e-300;
  CHECK(estimation_quality(tiny, one, 10.0, 1)(0, 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(estimation_quality(beta, one, 10.0, 1), ConfigError);
}

TEST_CASE("estimation quality never exceeds beta and drops with contamination") {
  Rng rng(8);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  MatrixX<double> beta(6, 4);
  for (Index i = 0; i < beta.size(); ++i) beta(i) = u(rng);
  const MatrixX<double> alone = estimation_quality<double>(beta, PilotGram::Identity(4, 4), 5.0, 2);
  const MatrixX<double> crowded = estimation_quality<double>(beta, PilotGram::Ones(4, 4), 5.0, 2);
  CHECK((alone.array() <= beta.array()).all());
  CHECK((crowded.array() < alone.array()).all());
}

}
