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

#include "cfmimo/harness.hpp"
#include "cfmimo/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace cfmimo::testing {

inline ExperimentConfig small_config(Index m, Index t, Index a = 2, Index lp = 5,
                                     std::uint64_t seed = 7) {
  ExperimentConfig c;
  c.network.num_aps = m;
  c.network.num_ues = t;
  c.network.antennas_per_ap = a;
  c.network.rng_seed = seed;
  c.pilot_length = lp;
  return c;
}

/// One drop of a generated network wrapped as solver input.
inline ProblemData make_problem(const ExperimentConfig& config, Index drop = 0,
                                double alpha = 0.001) {
  return ProblemData{generate_drop(config, drop).channel, config.system_params(alpha)};
}

inline ProblemData make_problem(Index m, Index t, std::uint64_t seed, double alpha = 0.001,
                                Index a = 2, Index lp = 5) {
  return make_problem(small_config(m, t, a, lp, seed), 0, alpha);
}

/// Interior point: eta in [lo, 1], d in [lo, 1].
inline std::pair<PowerVector, AssociationMatrix> random_point(Index m, Index t, Rng& rng,
                                                              double lo = 0.05) {
  std::uniform_real_distribution<double> u(lo, 1.0);
  PowerVector eta(t);
  AssociationMatrix d(m, t);
  for (Index i = 0; i < t; ++i) eta(i) = u(rng);
  for (Index i = 0; i < d.size(); ++i) d(i) = u(rng);
  return {eta, d};
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace cfmimo::testing
