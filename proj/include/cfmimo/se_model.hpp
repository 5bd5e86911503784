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

#include "cfmimo/errors.hpp"
#include "cfmimo/types.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cfmimo {

struct SystemParams {
  Index antennas = 2;          // A
  double p_u = 1.0;            // normalized uplink SNR
  double prelog = 0.975;       // w, bits/s/Hz scale
  double alpha = 0.0;          // l1 weight on the association matrix
  VectorX<double> qos;         // minimum SE per UE, bits/s/Hz
  Index coherence_length = 200;  // L_c
  Index pilot_length = 5;        // L_p

  /// w' = w / ln 2.
  double prelog_nats() const { return prelog / std::numbers::ln2; }

  /// SINR target g_t = 2^(qos_t / w) - 1 equivalent to SE_t >= qos_t.
  VectorX<double> sinr_targets() const {
    return (qos.array() / prelog).unaryExpr([](double x) { return std::exp2(x) - 1.0; });
  }

  void validate(Index num_ues) const {
    if (antennas < 1) throw ConfigError("antennas must be at least 1");
    if (!(p_u > 0.0)) throw ConfigError("p_u must be positive");
    if (!(prelog > 0.0)) throw ConfigError("prelog must be positive");
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
    if (!(pilot_length > 0 && pilot_length < coherence_length))
      throw ConfigError("need 0 < L_p < L_c");
    if (qos.size() != num_ues)
      throw ConfigError("qos has " + std::to_string(qos.size()) + " entries, expected " +
                        std::to_string(num_ues));
    if ((qos.array() < 0.0).any()) throw ConfigError("qos entries must be nonnegative");
  }
};

/// Pilot-overhead prelog 1 - L_p / L_c.
inline double pilot_overhead_prelog(Index pilot_length, Index coherence_length) {
  return 1.0 - static_cast<double>(pilot_length) / static_cast<double>(coherence_length);
}

/// Transmit power over thermal noise (-174 dBm/Hz) in the given band.
inline double normalized_snr(double power_mw, double bandwidth_hz, double noise_figure_db) {
  const double noise_dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return std::pow(10.0, (10.0 * std::log10(power_mw) - noise_dbm) / 10.0);
}

/// Second-order channel statistics shared by every evaluation of one drop.
template <typename Scalar>
struct ChannelStats {
  MatrixX<Scalar> beta;   // M x T
  MatrixX<Scalar> gamma;  // M x T
  MatrixX<Scalar> gram;   // T x T

  Index num_aps() const { return beta.rows(); }
  Index num_ues() const { return beta.cols(); }

  template <typename Other>
  ChannelStats<Other> cast() const {
    return {beta.template cast<Other>(), gamma.template cast<Other>(),
            gram.template cast<Other>()};
  }

  void validate() const {
    if (gamma.rows() != beta.rows() || gamma.cols() != beta.cols())
      throw ConfigError("beta and gamma must have the same shape");
    if (gram.rows() != beta.cols() || gram.cols() != beta.cols())
      throw ConfigError("gram must be T x T");
    if (!(beta.array() > Scalar(0)).all()) throw ConfigError("beta must be positive");
  }
};

template <typename Scalar>
struct SinrBreakdown {
  Scalar signal{};
  Scalar pilot_contamination{};
  Scalar beamforming_uncertainty{};
  Scalar noise{};

  Scalar interference() const { return pilot_contamination + beamforming_uncertainty + noise; }
  Scalar sinr() const { return signal / interference(); }
};

/// Per-UE numerator and interference terms of the MR-combining SINR.
template <typename Scalar>
struct InterferenceTerms {
  VectorX<Scalar> signal;
  VectorX<Scalar> pilot_contamination;
  VectorX<Scalar> beamforming_uncertainty;
  VectorX<Scalar> noise;

  VectorX<Scalar> interference() const {
    return pilot_contamination + beamforming_uncertainty + noise;
  }
  VectorX<Scalar> sinr() const { return signal.cwiseQuotient(interference()); }

  SinrBreakdown<Scalar> at(Index t) const {
    return {signal(t), pilot_contamination(t), beamforming_uncertainty(t), noise(t)};
  }
};

namespace detail {

template <typename Scalar>
void check_dimensions(const VectorX<Scalar>& eta, const MatrixX<Scalar>& d,
                      const ChannelStats<Scalar>& ch) {
  if (eta.size() != ch.num_ues()) throw ConfigError("power vector length must equal T");
  if (d.rows() != ch.num_aps() || d.cols() != ch.num_ues())
    throw ConfigError("association matrix must be M x T");
}

template <typename Scalar>
void check_columns(const MatrixX<Scalar>& d) {
  for (Index t = 0; t < d.cols(); ++t) {
    if ((d.col(t).array() == Scalar(0)).all())
      throw DegenerateAssociation("UE " + std::to_string(t) + " has no serving AP");
  }
}

}  // namespace detail

/// Coherent-combining cross gains C(t', t) = sum_m d_mt gamma_mt beta_mt' / beta_mt.
/// C(t, t) is the effective gain S_t = sum_m d_mt gamma_mt.
template <typename Scalar>
MatrixX<Scalar> cross_gains(const MatrixX<Scalar>& d, const ChannelStats<Scalar>& ch) {
  const MatrixX<Scalar> weights = (d.array() * ch.gamma.array() / ch.beta.array()).matrix();
  return ch.beta.transpose() * weights;
}

template <typename Scalar>
InterferenceTerms<Scalar> sinr_terms(const VectorX<Scalar>& eta, const MatrixX<Scalar>& d,
                                     const ChannelStats<Scalar>& ch, const SystemParams& p) {
  detail::check_dimensions(eta, d, ch);
  detail::check_columns(d);
  const auto a = static_cast<Scalar>(p.antennas);
  const auto pu = static_cast<Scalar>(p.p_u);

  const MatrixX<Scalar> dg = d.cwiseProduct(ch.gamma);
  const VectorX<Scalar> gain = dg.colwise().sum().transpose();
  const MatrixX<Scalar> cross = cross_gains(d, ch);

  // contam(t', t) = eta_t' |psi_t^H psi_t'|^2 C(t', t)^2 for t' != t
  MatrixX<Scalar> contam =
      (ch.gram.transpose().array() * cross.array().square()).colwise() * eta.array();
  contam.diagonal().setZero();

  InterferenceTerms<Scalar> out;
  out.signal = a * a * pu * eta.cwiseProduct(gain.cwiseAbs2());
  out.pilot_contamination = a * a * pu * contam.colwise().sum().transpose();
  out.beamforming_uncertainty = a * pu * dg.transpose() * (ch.beta * eta);
  out.noise = a * gain;
  return out;
}

/// Terms for UE t when its association column is replaced by `column`. Only
/// column t enters UE t's SINR, so this is O(M T) instead of O(M T^2).
template <typename Scalar>
SinrBreakdown<Scalar> column_terms(Index t, const VectorX<Scalar>& eta,
                                   const VectorX<Scalar>& column,
                                   const ChannelStats<Scalar>& ch, const SystemParams& p) {
  const auto a = static_cast<Scalar>(p.antennas);
  const auto pu = static_cast<Scalar>(p.p_u);
  const VectorX<Scalar> dg = column.cwiseProduct(ch.gamma.col(t));
  const Scalar gain = dg.sum();
  const VectorX<Scalar> cross =
      ch.beta.transpose() * dg.cwiseQuotient(ch.beta.col(t));  // C(t', t)
  Scalar contam(0);
  for (Index s = 0; s < ch.num_ues(); ++s) {
    if (s != t) contam += eta(s) * ch.gram(t, s) * cross(s) * cross(s);
  }
  SinrBreakdown<Scalar> out;
  out.signal = a * a * pu * eta(t) * gain * gain;
  out.pilot_contamination = a * a * pu * contam;
  out.beamforming_uncertainty = a * pu * dg.dot(ch.beta * eta);
  out.noise = a * gain;
  return out;
}

/// SINR of UE t together with its breakdown.
template <typename Scalar>
std::pair<Scalar, SinrBreakdown<Scalar>> sinr(Index t, const VectorX<Scalar>& eta,
                                              const MatrixX<Scalar>& d,
                                              const ChannelStats<Scalar>& ch,
                                              const SystemParams& p) {
  const SinrBreakdown<Scalar> b = sinr_terms(eta, d, ch, p).at(t);
  return {b.sinr(), b};
}

template <typename Scalar>
VectorX<Scalar> se_from_sinr(const VectorX<Scalar>& sinr_values, const SystemParams& p) {
  const auto w = static_cast<Scalar>(p.prelog);
  return sinr_values.unaryExpr([w](Scalar g) {
    using std::log2;
    return w * log2(Scalar(1) + g);
  });
}

/// Per-UE SE, w log2(1 + SINR_t).
template <typename Scalar>
VectorX<Scalar> spectral_efficiency(const VectorX<Scalar>& eta, const MatrixX<Scalar>& d,
                                    const ChannelStats<Scalar>& ch, const SystemParams& p) {
  return se_from_sinr<Scalar>(sinr_terms(eta, d, ch, p).sinr(), p);
}

template <typename Scalar>
Scalar se(Index t, const VectorX<Scalar>& eta, const MatrixX<Scalar>& d,
          const ChannelStats<Scalar>& ch, const SystemParams& p) {
  return spectral_efficiency(eta, d, ch, p)(t);
}

/// sum_t (SE_t - alpha ||D_t||_1).
template <typename Scalar>
Scalar penalized_objective(const VectorX<Scalar>& eta, const MatrixX<Scalar>& d,
                           const ChannelStats<Scalar>& ch, const SystemParams& p) {
  return spectral_efficiency(eta, d, ch, p).sum() -
         static_cast<Scalar>(p.alpha) * d.cwiseAbs().sum();
}

template <typename Scalar>
struct FronthaulLoad {
  VectorX<Scalar> per_ap;
  Scalar max_load{};
};

/// Load of AP m is sum_t d_mt SE_t.
template <typename Scalar>
FronthaulLoad<Scalar> fronthaul_load(const MatrixX<Scalar>& d, const VectorX<Scalar>& se_values) {
  if (se_values.size() != d.cols()) throw ConfigError("SE vector length must equal T");
  FronthaulLoad<Scalar> out;
  out.per_ap = d * se_values;
  out.max_load = out.per_ap.size() > 0 ? out.per_ap.maxCoeff() : Scalar(0);
  return out;
}

inline constexpr double kQosTolerance = 1e-9;

template <typename Scalar>
Eigen::Array<bool, Eigen::Dynamic, 1> qos_satisfied(const VectorX<Scalar>& eta,
                                                    const MatrixX<Scalar>& d,
                                                    const ChannelStats<Scalar>& ch,
                                                    const SystemParams& p) {
  const VectorX<Scalar> values = spectral_efficiency(eta, d, ch, p);
  return values.array() >= p.qos.template cast<Scalar>().array() - Scalar(kQosTolerance);
}

}  // namespace cfmimo
