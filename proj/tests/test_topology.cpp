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
#include "cfmimo/topology.hpp"

#include <doctest.h>

#include <cmath>

using namespace cfmimo;

TEST_SUITE("topology") {

TEST_CASE("generated points lie in the square and are reproducible") {
  NetworkConfig cfg;
  cfg.num_aps = 100;
  cfg.num_ues = 40;
  cfg.antennas_per_ap = 4;
  Rng r1(3), r2(3);
  const Topology a = generate_topology(cfg, r1);
  const Topology b = generate_topology(cfg, r2);
  CHECK(a.aps.size() == 100);
  CHECK(a.ues.size() == 40);
  for (const auto* pts : {&a.aps, &a.ues})
    for (const Position& p : *pts) {
      CHECK(p.x >= 0.0);
      CHECK(p.x < cfg.area_side);
      CHECK(p.y >= 0.0);
      CHECK(p.y < cfg.area_side);
    }
  for (std::size_t i = 0; i < a.aps.size(); ++i) {
    CHECK(a.aps[i].x == b.aps[i].x);
    CHECK(a.aps[i].y == b.aps[i].y);
  }
}

TEST_CASE("single AP and UE") {
  NetworkConfig cfg;
  cfg.num_aps = 1;
  cfg.num_ues = 1;
  Rng rng(1);
  const Topology t = generate_topology(cfg, rng);
  CHECK(t.aps.size() == 1);
  CHECK(t.ues.size() == 1);
}

TEST_CASE("config validation") {
  NetworkConfig cfg;
  cfg.num_ues = cfg.num_aps * cfg.antennas_per_ap;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = NetworkConfig{};
  cfg.area_side = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("wrap distance") {
  const double side = 1000.0;
  CHECK(wrap_distance({3, 4}, {3, 4}, side) == 0.0);
  CHECK(wrap_distance({0, 0}, {side - 0.25, 0}, side) == doctest::Approx(0.25));
  CHECK(wrap_distance({0, 0}, {side / 2, side / 2}, side) ==
        doctest::Approx(side / std::sqrt(2.0)));
  // Brute force over the nine images.
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, side);
  for (int k = 0; k < 200; ++k) {
    const Position a{u(rng), u(rng)}, b{u(rng), u(rng)};
    double best = 1e300;
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        best = std::min(best, std::hypot(a.x - b.x - i * side, a.y - b.y - j * side));
    CHECK(wrap_distance(a, b, side) == doctest::Approx(best));
    CHECK(wrap_distance(a, b, side) == doctest::Approx(wrap_distance(b, a, side)));
    CHECK(wrap_distance(a, b, side) <= side / std::sqrt(2.0) + 1e-9);
  }
}

TEST_CASE("path loss regimes") {
  const PathLossModel m;
  CHECK(std::abs(path_loss_db(m.d1 * (1 - 1e-12), m) - path_loss_db(m.d1 * (1 + 1e-12), m)) <
        1e-9);
  CHECK(std::abs(path_loss_db(m.d0 * (1 - 1e-12), m) - path_loss_db(m.d0 * (1 + 1e-12), m)) <
        1e-9);
  CHECK(path_loss_db(m.d0 / 2, m) == path_loss_db(m.d0 / 4, m));
  CHECK(path_loss_db(m.d0 / 2, m) == path_loss_db(m.d0, m));
  CHECK(path_loss_db(10 * m.d1, m) == doctest::Approx(path_loss_db(m.d1, m) - m.far_slope));
  CHECK(path_loss_db(1000.0, m) == doctest::Approx(-m.fixed_loss_db));
  CHECK(path_loss_db(m.d1, m) - path_loss_db(m.d0, m) ==
        doctest::Approx(-m.mid_slope * std::log10(m.d1 / m.d0)));
  CHECK(PathLossModel::hata_offset_db(1900, 15, 1.65) == doctest::Approx(140.7151).epsilon(1e-6));
  for (double d = 1.0; d < 1500.0; d *= 1.1) CHECK(path_loss_db(d * 1.1, m) <= path_loss_db(d, m));
}

TEST_CASE("LSFC without shadowing follows path loss") {
  NetworkConfig cfg;
  cfg.num_aps = 12;
  cfg.num_ues = 6;
  Rng rng(11);
  const Topology topo = generate_topology(cfg, rng);
  ShadowingModel none;
  none.sigma_db = 0.0;
  const PathLossModel pl;
  const LsfcMatrix beta = compute_lsfc(topo, pl, none, rng);
  const MatrixX<double> dist = distance_matrix(topo);
  for (Index t = 0; t < beta.cols(); ++t)
    for (Index m = 0; m < beta.rows(); ++m) {
      CHECK(beta(m, t) == std::pow(10.0, path_loss_db(dist(m, t), pl) / 10.0));
      for (Index m2 = 0; m2 < beta.rows(); ++m2)
        if (dist(m, t) < dist(m2, t)) CHECK(beta(m, t) >= beta(m2, t));
    }
}

TEST_CASE("LSFC with shadowing is reproducible and consumes a fixed stream") {
  NetworkConfig cfg;
  Rng rng(2);
  const Topology topo = generate_topology(cfg, rng);
  Rng s1(9), s2(9);
  const LsfcMatrix a = compute_lsfc(topo, {}, {}, s1);
  const LsfcMatrix b = compute_lsfc(topo, {}, {}, s2);
  CHECK(a == b);
  CHECK(s1() == s2());
  CHECK((a.array() > 0.0).all());
}

}
