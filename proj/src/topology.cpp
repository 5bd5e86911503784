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

#include "cfmimo/topology.hpp"

#include "cfmimo/errors.hpp"

#include <cmath>
#include <limits>

namespace cfmimo {

void NetworkConfig::validate() const {
  if (!(area_side > 0.0)) throw ConfigError("area_side must be positive");
  if (num_aps < 1) throw ConfigError("num_aps must be at least 1");
  if (num_ues < 1) throw ConfigError("num_ues must be at least 1");
  if (antennas_per_ap < 1) throw ConfigError("antennas_per_ap must be at least 1");
  if (num_ues >= num_aps * antennas_per_ap)
    throw ConfigError("num_ues must be smaller than num_aps * antennas_per_ap");
}

double PathLossModel::hata_offset_db(double f_mhz, double ap_height, double ue_height) {
  const double lf = std::log10(f_mhz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(ap_height) -
         (1.1 * lf - 0.7) * ue_height + (1.56 * lf - 0.8);
}

void PathLossModel::validate() const {
  if (!(d0 > 0.0 && d0 < d1)) throw ConfigError("path loss requires 0 < d0 < d1");
  if (!std::isfinite(fixed_loss_db)) throw ConfigError("fixed_loss_db must be finite");
  if (far_slope < 0.0 || mid_slope < 0.0 || near_slope < 0.0)
    throw ConfigError("path loss slopes must be nonnegative");
}

void ShadowingModel::validate() const {
  if (!(sigma_db >= 0.0)) throw ConfigError("shadowing sigma must be nonnegative");
}

Topology generate_topology(const NetworkConfig& config, Rng& rng) {
  config.validate();
  std::uniform_real_distribution<double> coord(0.0, config.area_side);
  Topology topo;
  topo.area_side = config.area_side;
  topo.wrap_around = config.wrap_around;
  topo.aps.resize(static_cast<std::size_t>(config.num_aps));
  topo.ues.resize(static_cast<std::size_t>(config.num_ues));
  for (auto& p : topo.aps) {
    p.x = coord(rng);
    p.y = coord(rng);
  }
  for (auto& p : topo.ues) {
    p.x = coord(rng);
    p.y = coord(rng);
  }
  return topo;
}

double wrap_distance(Position a, Position b, double side) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      const double dx = a.x - (b.x + i * side);
      const double dy = a.y - (b.y + j * side);
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

double path_loss_db(double distance, const PathLossModel& model) {
  const auto far = [&](double d) {
    return -model.fixed_loss_db - model.far_slope * std::log10(d / 1000.0);
  };
  if (distance > model.d1) return far(distance);
  const double at_d1 = far(model.d1);
  const auto mid = [&](double d) {
    return at_d1 - model.mid_slope * std::log10(d / model.d1);
  };
  if (distance > model.d0) return mid(distance);
  if (model.near_slope == 0.0) return mid(model.d0);
  // Guard the log for colocated nodes.
  const double d = std::max(distance, 1e-3);
  return mid(model.d0) - model.near_slope * std::log10(d / model.d0);
}

MatrixX<double> distance_matrix(const Topology& topology) {
  const auto m = static_cast<Index>(topology.aps.size());
  const auto t = static_cast<Index>(topology.ues.size());
  MatrixX<double> dist(m, t);
  for (Index j = 0; j < t; ++j) {
    for (Index i = 0; i < m; ++i) {
      const Position a = topology.aps[static_cast<std::size_t>(i)];
      const Position b = topology.ues[static_cast<std::size_t>(j)];
      dist(i, j) = topology.wrap_around ? wrap_distance(a, b, topology.area_side)
                                        : std::hypot(a.x - b.x, a.y - b.y);
    }
  }
  return dist;
}

LsfcMatrix compute_lsfc(const Topology& topology, const PathLossModel& model,
                        const ShadowingModel& shadow, Rng& rng) {
  model.validate();
  shadow.validate();
  const MatrixX<double> dist = distance_matrix(topology);
  std::normal_distribution<double> normal(0.0, 1.0);
  LsfcMatrix beta(dist.rows(), dist.cols());
  for (Index j = 0; j < dist.cols(); ++j) {
    for (Index i = 0; i < dist.rows(); ++i) {
      const double z = shadow.sigma_db * normal(rng);
      const bool shadowed = !shadow.apply_beyond_d1 || dist(i, j) > model.d1;
      const double gain_db = path_loss_db(dist(i, j), model) + (shadowed ? z : 0.0);
      beta(i, j) = std::pow(10.0, gain_db / 10.0);
    }
  }
  return beta;
}

}  // namespace cfmimo
