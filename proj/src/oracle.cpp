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

#include "cfmimo/oracle.hpp"

#include "cfmimo/csv.hpp"
#include "cfmimo/errors.hpp"
#include "cfmimo/random.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>

namespace cfmimo {

namespace {

using Complex = std::complex<double>;

constexpr Index kMaxBatches = 100;

// Accumulates one scalar estimate per batch; the reported std_error is the
// spread of batch estimates, which needs no closed-form variance.
struct BatchStat {
  std::vector<double> values;

  void push(double v) { values.push_back(v); }
  double mean() const {
    double acc = 0.0;
    for (double v : values) acc += v;
    return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
  }
  double std_error() const {
    const auto n = static_cast<double>(values.size());
    if (n < 2.0) return 0.0;
    const double mu = mean();
    double ss = 0.0;
    for (double v : values) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / (n - 1.0) / n);
  }
};

std::vector<Index> batch_sizes(Index n_samples) {
  if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
  const Index batches = std::min(kMaxBatches, n_samples);
  std::vector<Index> sizes(static_cast<std::size_t>(batches), n_samples / batches);
  for (Index b = 0; b < n_samples % batches; ++b) ++sizes[static_cast<std::size_t>(b)];
  return sizes;
}

// Channels, estimates and the MMSE scaling of one simulated coherence block.
struct PilotSampler {
  Index m, t, a;
  const LsfcMatrix& beta;
  const PilotAssignment& pilots;
  MatrixX<double> sqrt_beta;
  MatrixX<double> mmse;  // c_mt, g_hat_mt = c_mt * y_m psi_t^*
  std::vector<Complex> g, g_hat, received;

  PilotSampler(const LsfcMatrix& b, const PilotAssignment& p, Index antennas)
      : m(b.rows()), t(b.cols()), a(antennas), beta(b), pilots(p) {
    const double scale = p.p_p * static_cast<double>(p.pilot_length);
    const MatrixX<double> gram = pilot_gram(p);
    const MatrixX<double> denom = (scale * beta * gram).array() + 1.0;
    sqrt_beta = beta.cwiseSqrt();
    mmse = (std::sqrt(scale) * beta.array() / denom.array()).matrix();
    g.resize(static_cast<std::size_t>(m * t * a));
    g_hat.resize(g.size());
    received.resize(static_cast<std::size_t>(m * p.pilot_length * a));
  }

  std::size_t at(Index ap, Index ue, Index ant) const {
    return static_cast<std::size_t>((ap * t + ue) * a + ant);
  }

  void draw(Rng& rng) {
    const double amp = std::sqrt(pilots.p_p * static_cast<double>(pilots.pilot_length));
    for (Index ap = 0; ap < m; ++ap)
      for (Index ue = 0; ue < t; ++ue)
        for (Index k = 0; k < a; ++k) g[at(ap, ue, k)] = sqrt_beta(ap, ue) * complex_normal(rng);
    // Projection of the received pilot block onto each pilot direction.
    for (auto& r : received) r = complex_normal(rng);
    for (Index ap = 0; ap < m; ++ap)
      for (Index ue = 0; ue < t; ++ue) {
        const Index l = pilots.pilot_of[static_cast<std::size_t>(ue)];
        for (Index k = 0; k < a; ++k)
          received[static_cast<std::size_t>((ap * pilots.pilot_length + l) * a + k)] +=
              amp * g[at(ap, ue, k)];
      }
    for (Index ap = 0; ap < m; ++ap)
      for (Index ue = 0; ue < t; ++ue) {
        const Index l = pilots.pilot_of[static_cast<std::size_t>(ue)];
        for (Index k = 0; k < a; ++k)
          g_hat[at(ap, ue, k)] =
              mmse(ap, ue) *
              received[static_cast<std::size_t>((ap * pilots.pilot_length + l) * a + k)];
      }
  }
};

void check_inputs(const LsfcMatrix& beta, const PilotAssignment& pilots, Index antennas) {
  pilots.validate();
  if (static_cast<Index>(pilots.pilot_of.size()) != beta.cols())
    throw ConfigError("pilot assignment must cover every UE");
  if (antennas < 1) throw ConfigError("antennas must be at least 1");
  if ((beta.array() < 0.0).any() || !beta.allFinite())
    throw ConfigError("beta must be finite and nonnegative");
}

}  // namespace

EstimateStats sample_estimates(const LsfcMatrix& beta, const PilotAssignment& pilots,
                               Index antennas, Index n_samples, std::uint64_t seed) {
  check_inputs(beta, pilots, antennas);
  const Index m = beta.rows(), t = beta.cols();
  const auto sizes = batch_sizes(n_samples);
  std::vector<BatchStat> power(static_cast<std::size_t>(m * t)),
      ortho(static_cast<std::size_t>(m * t));

  PilotSampler sampler(beta, pilots, antennas);
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    Rng rng(derive_seed(seed, 11, b));
    MatrixX<double> acc_power = MatrixX<double>::Zero(m, t);
    MatrixX<double> acc_ortho = MatrixX<double>::Zero(m, t);
    for (Index s = 0; s < sizes[b]; ++s) {
      sampler.draw(rng);
      for (Index ap = 0; ap < m; ++ap)
        for (Index ue = 0; ue < t; ++ue)
          for (Index k = 0; k < antennas; ++k) {
            const Complex gh = sampler.g_hat[sampler.at(ap, ue, k)];
            const Complex err = sampler.g[sampler.at(ap, ue, k)] - gh;
            acc_power(ap, ue) += std::norm(gh);
            acc_ortho(ap, ue) += std::real(std::conj(gh) * err);
          }
    }
    const double norm = static_cast<double>(sizes[b] * antennas);
    for (Index i = 0; i < m * t; ++i) {
      power[static_cast<std::size_t>(i)].push(acc_power(i) / norm);
      ortho[static_cast<std::size_t>(i)].push(acc_ortho(i) / norm);
    }
  }

  EstimateStats out;
  out.samples = n_samples;
  out.gamma_hat.resize(m, t);
  out.gamma_stderr.resize(m, t);
  out.orthogonality.resize(m, t);
  out.orthogonality_stderr.resize(m, t);
  for (Index i = 0; i < m * t; ++i) {
    out.gamma_hat(i) = power[static_cast<std::size_t>(i)].mean();
    out.gamma_stderr(i) = power[static_cast<std::size_t>(i)].std_error();
    out.orthogonality(i) = ortho[static_cast<std::size_t>(i)].mean();
    out.orthogonality_stderr(i) = ortho[static_cast<std::size_t>(i)].std_error();
  }
  return out;
}

EmpiricalTerms empirical_sinr_terms(const PowerVector& eta, const AssociationMatrix& d_binary,
                                    const LsfcMatrix& beta, const PilotAssignment& pilots,
                                    const SystemParams& params, Index n_samples,
                                    std::uint64_t seed) {
  const Index antennas = static_cast<Index>(params.antennas);
  check_inputs(beta, pilots, antennas);
  if (eta.size() != beta.cols() || d_binary.rows() != beta.rows() ||
      d_binary.cols() != beta.cols())
    throw ConfigError("eta and d must match the M x T shape of beta");
  if (((d_binary.array() != 0.0) && (d_binary.array() != 1.0)).any())
    throw ConfigError("the oracle requires a binary association matrix");
  detail::check_columns(d_binary);

  const Index m = beta.rows(), t = beta.cols();
  const double pu = params.p_u;
  const auto sizes = batch_sizes(n_samples);
  std::vector<BatchStat> signal(static_cast<std::size_t>(t)), contam(signal.size()),
      uncertainty(signal.size()), noise(signal.size());

  PilotSampler sampler(beta, pilots, antennas);
  std::vector<Complex> cross(static_cast<std::size_t>(t * t));
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    Rng rng(derive_seed(seed, 12, b));
    const Index n = sizes[b];
    // First and second moments of X_tt' = sum_m d_mt g_hat_mt^H g_mt' and of
    // the combined noise z_t = sum_m d_mt g_hat_mt^H n_m.
    std::vector<Complex> sum(cross.size(), 0.0);
    std::vector<double> sum_sq(cross.size(), 0.0);
    std::vector<double> noise_sq(static_cast<std::size_t>(t), 0.0);
    std::vector<Complex> data_noise(static_cast<std::size_t>(m * antennas));
    for (Index s = 0; s < n; ++s) {
      sampler.draw(rng);
      for (auto& z : data_noise) z = complex_normal(rng);
      for (Index ue = 0; ue < t; ++ue) {
        Complex z = 0.0;
        for (Index other = 0; other < t; ++other) {
          Complex x = 0.0;
          for (Index ap = 0; ap < m; ++ap) {
            if (d_binary(ap, ue) == 0.0) continue;
            for (Index k = 0; k < antennas; ++k)
              x += std::conj(sampler.g_hat[sampler.at(ap, ue, k)]) *
                   sampler.g[sampler.at(ap, other, k)];
          }
          const auto idx = static_cast<std::size_t>(ue * t + other);
          sum[idx] += x;
          sum_sq[idx] += std::norm(x);
        }
        for (Index ap = 0; ap < m; ++ap) {
          if (d_binary(ap, ue) == 0.0) continue;
          for (Index k = 0; k < antennas; ++k)
            z += std::conj(sampler.g_hat[sampler.at(ap, ue, k)]) *
                 data_noise[static_cast<std::size_t>(ap * antennas + k)];
        }
        noise_sq[static_cast<std::size_t>(ue)] += std::norm(z);
      }
    }

    const double nn = static_cast<double>(n);
    for (Index ue = 0; ue < t; ++ue) {
      double sig = 0.0, pc = 0.0, bu = 0.0;
      for (Index other = 0; other < t; ++other) {
        const auto idx = static_cast<std::size_t>(ue * t + other);
        const Complex mean = sum[idx] / nn;
        const double second = sum_sq[idx] / nn;
        const double var = n > 1 ? (second - std::norm(mean)) * nn / (nn - 1.0) : 0.0;
        // |mean|^2 - var/n is unbiased for |E X|^2.
        const double coherent = std::norm(mean) - var / nn;
        const double weight = pu * eta(other);
        if (other == ue)
          sig = weight * coherent;
        else
          pc += weight * coherent;
        bu += weight * var;
      }
      signal[static_cast<std::size_t>(ue)].push(sig);
      contam[static_cast<std::size_t>(ue)].push(pc);
      uncertainty[static_cast<std::size_t>(ue)].push(bu);
      noise[static_cast<std::size_t>(ue)].push(noise_sq[static_cast<std::size_t>(ue)] / nn);
    }
  }

  EmpiricalTerms out;
  out.samples = n_samples;
  const auto fill = [t](InterferenceTerms<double>& dst, const std::vector<BatchStat>* src,
                        bool spread) {
    VectorX<double>* fields[] = {&dst.signal, &dst.pilot_contamination,
                                 &dst.beamforming_uncertainty, &dst.noise};
    for (int f = 0; f < 4; ++f) {
      fields[f]->resize(t);
      for (Index ue = 0; ue < t; ++ue) {
        const auto& st = src[f][static_cast<std::size_t>(ue)];
        (*fields[f])(ue) = spread ? st.std_error() : st.mean();
      }
    }
  };
  const std::vector<BatchStat> stats[] = {signal, contam, uncertainty, noise};
  fill(out.mean, stats, false);
  fill(out.std_error, stats, true);
  return out;
}

namespace {

ComparisonRow make_row(std::string term, std::string index, double closed, double empirical,
                       double std_error) {
  ComparisonRow r{std::move(term), std::move(index), closed, empirical, std_error, 0.0};
  const double diff = empirical - closed;
  if (std_error > 0.0)
    r.z = diff / std_error;
  else
    r.z = std::abs(diff) <= 1e-12 * (1.0 + std::abs(closed)) ? 0.0 : INFINITY;
  return r;
}

}  // namespace

std::vector<ComparisonRow> compare_estimates(const MatrixX<double>& gamma,
                                             const EstimateStats& stats) {
  if (gamma.rows() != stats.gamma_hat.rows() || gamma.cols() != stats.gamma_hat.cols())
    throw ConfigError("gamma and estimate statistics differ in shape");
  std::vector<ComparisonRow> rows;
  for (Index ue = 0; ue < gamma.cols(); ++ue)
    for (Index ap = 0; ap < gamma.rows(); ++ap)
      rows.push_back(make_row("gamma", std::to_string(ap) + ":" + std::to_string(ue),
                              gamma(ap, ue), stats.gamma_hat(ap, ue),
                              stats.gamma_stderr(ap, ue)));
  return rows;
}

std::vector<ComparisonRow> compare_terms(const InterferenceTerms<double>& closed,
                                         const EmpiricalTerms& empirical) {
  if (closed.signal.size() != empirical.mean.signal.size())
    throw ConfigError("closed-form and empirical terms differ in size");
  std::vector<ComparisonRow> rows;
  const auto add = [&](const char* name, const VectorX<double>& c, const VectorX<double>& e,
                       const VectorX<double>& s) {
    for (Index ue = 0; ue < c.size(); ++ue)
      rows.push_back(make_row(name, std::to_string(ue), c(ue), e(ue), s(ue)));
  };
  add("signal", closed.signal, empirical.mean.signal, empirical.std_error.signal);
  add("pilot_contamination", closed.pilot_contamination, empirical.mean.pilot_contamination,
      empirical.std_error.pilot_contamination);
  add("beamforming_uncertainty", closed.beamforming_uncertainty,
      empirical.mean.beamforming_uncertainty, empirical.std_error.beamforming_uncertainty);
  add("noise", closed.noise, empirical.mean.noise, empirical.std_error.noise);
  return rows;
}

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "term,index,closed_form,empirical,stderr,z\n";
  for (const auto& r : rows)
    out << r.term << ',' << r.index << ',' << format_double(r.closed_form) << ','
        << format_double(r.empirical) << ',' << format_double(r.std_error) << ','
        << format_double(r.z) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace cfmimo
