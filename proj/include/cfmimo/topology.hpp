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

#include "cfmimo/random.hpp"
#include "cfmimo/types.hpp"

#include <vector>

namespace cfmimo {

struct NetworkConfig {
  double area_side = 1000.0;  // meters
  Index num_aps = 30;         // M
  Index num_ues = 10;         // T
  Index antennas_per_ap = 2;  // A
  std::uint64_t rng_seed = 1;
  bool wrap_around = true;

  void validate() const;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// Three-slope path loss, returned as a gain in dB (negative for real links).
///
/// Far regime (d > d1): -L - far_slope * log10(d / 1 km).
/// Mid regime (d0 < d <= d1) and near regime (d <= d0) are anchored at the
/// breakpoints so the curve is continuous; near_slope = 0 gives the usual
/// flat near-field cap.
struct PathLossModel {
  double d0 = 10.0;  // meters
  double d1 = 50.0;  // meters
  double fixed_loss_db = hata_offset_db(1900.0, 15.0, 1.65);
  double far_slope = 35.0;  // dB per decade
  double mid_slope = 20.0;
  double near_slope = 0.0;

  /// COST-231 Hata style offset for carrier `f_mhz`, AP/UE heights in meters.
  static double hata_offset_db(double f_mhz, double ap_height, double ue_height);

  void validate() const;
};

struct ShadowingModel {
  double sigma_db = 8.0;
  bool apply_beyond_d1 = true;

  void validate() const;
};

struct Topology {
  std::vector<Position> aps;
  std::vector<Position> ues;
  double area_side = 1000.0;
  bool wrap_around = true;
};

/// APs then UEs, i.i.d. uniform over [0, side)^2.
Topology generate_topology(const NetworkConfig& config, Rng& rng);

/// Minimum distance over the 3x3 grid of translated images of `b`.
double wrap_distance(Position a, Position b, double side);

double path_loss_db(double distance, const PathLossModel& model);

/// beta_mt = 10^((PL(d_mt) + z_mt) / 10), z_mt ~ N(0, sigma^2) i.i.d.
/// One draw is consumed per (m, t) pair in column-major order whether or not
/// it is applied, so the stream does not depend on the geometry.
LsfcMatrix compute_lsfc(const Topology& topology, const PathLossModel& model,
                        const ShadowingModel& shadow, Rng& rng);

/// Distance matrix (M x T) under the topology's wrap convention.
MatrixX<double> distance_matrix(const Topology& topology);

}  // namespace cfmimo
