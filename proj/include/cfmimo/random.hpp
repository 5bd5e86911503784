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

#include <complex>
#include <cstdint>
#include <random>

namespace cfmimo {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for an independent stream, e.g. one Monte-Carlo drop or one sample batch.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

// CN(0,1): two independent real normals, each scaled by 1/sqrt(2).
template <typename Generator>
std::complex<double> complex_normal(Generator& gen) {
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(gen);
  const double im = normal(gen);
  return {kInvSqrt2 * re, kInvSqrt2 * im};
}

}  // namespace cfmimo
