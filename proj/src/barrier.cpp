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

#include "cfmimo/barrier.hpp"

#include "cfmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfmimo {

double QuadraticConstraint::value(const VectorX<double>& x) const {
  double v = offset + linear.dot(x);
  if (quad.size() > 0) v -= x.dot(quad * x);
  return v;
}

VectorX<double> QuadraticConstraint::gradient(const VectorX<double>& x) const {
  if (quad.size() == 0) return linear;
  return linear - 2.0 * (quad * x);
}

namespace {

constexpr double kStrictSlack = 1e-7;

class BarrierProblem {
 public:
  BarrierProblem(const SmoothConcave& f, const VectorX<double>& lower,
                 const VectorX<double>& upper, const std::vector<QuadraticConstraint>& cons)
      : f_(f), lower_(lower), upper_(upper), cons_(cons), n_(lower.size()) {}

  Index size() const { return elastic_ ? n_ + 1 : n_; }
  Index barrier_count() const {
    return 2 * n_ + static_cast<Index>(cons_.size()) + (elastic_ ? 1 : 0);
  }

  void set_elastic(bool on) { elastic_ = on; }
  bool elastic() const { return elastic_; }
  double& rho() { return rho_; }

  double slack(const VectorX<double>& z) const { return elastic_ ? z(n_) : 0.0; }

  bool strictly_feasible(const VectorX<double>& z) const {
    const auto x = z.head(n_);
    if (!((x.array() > lower_.array()).all() && (x.array() < upper_.array()).all())) return false;
    const double s = slack(z);
    if (elastic_ && !(s > 0.0)) return false;
    for (const auto& c : cons_) {
      if (!(c.value(x) + s > 0.0)) return false;
    }
    return true;
  }

  double phi(const VectorX<double>& z, double mu) const {
    const VectorX<double> x = z.head(n_);
    const double s = slack(z);
    double v = f_.value(x) - (elastic_ ? rho_ * s : 0.0);
    double logs = ((x - lower_).array().log() + (upper_ - x).array().log()).sum();
    for (const auto& c : cons_) logs += std::log(c.value(x) + s);
    if (elastic_) logs += std::log(s);
    return v + mu * logs;
  }

  void derivatives(const VectorX<double>& z, double mu, VectorX<double>& g,
                   MatrixX<double>& h) const {
    const VectorX<double> x = z.head(n_);
    const double s = slack(z);
    VectorX<double> gf(n_);
    MatrixX<double> hf(n_, n_);
    f_.derivatives(x, gf, hf);

    const Index dim = size();
    g.setZero(dim);
    h.setZero(dim, dim);
    g.head(n_) = gf;
    h.topLeftCorner(n_, n_) = hf;

    const VectorX<double> lo = (x - lower_).cwiseInverse();
    const VectorX<double> hi = (upper_ - x).cwiseInverse();
    g.head(n_) += mu * (lo - hi);
    h.topLeftCorner(n_, n_).diagonal() -= mu * (lo.cwiseAbs2() + hi.cwiseAbs2());

    for (const auto& c : cons_) {
      const double ci = c.value(x) + s;
      const VectorX<double> dc = c.gradient(x);
      g.head(n_) += (mu / ci) * dc;
      h.topLeftCorner(n_, n_).noalias() -= (mu / (ci * ci)) * dc * dc.transpose();
      if (c.quad.size() > 0) h.topLeftCorner(n_, n_) -= (2.0 * mu / ci) * c.quad;
      if (elastic_) {
        g(n_) += mu / ci;
        h(n_, n_) -= mu / (ci * ci);
        h.col(n_).head(n_) -= (mu / (ci * ci)) * dc;
        h.row(n_).head(n_) -= (mu / (ci * ci)) * dc.transpose();
      }
    }
    if (elastic_) {
      g(n_) += -rho_ + mu / s;
      h(n_, n_) -= mu / (s * s);
    }
  }

  double objective(const VectorX<double>& z) const { return f_.value(z.head(n_)); }

  double violation(const VectorX<double>& x) const {
    double worst = 0.0;
    for (const auto& c : cons_) worst = std::max(worst, -c.value(x));
    return worst;
  }

 private:
  const SmoothConcave& f_;
  const VectorX<double>& lower_;
  const VectorX<double>& upper_;
  const std::vector<QuadraticConstraint>& cons_;
  Index n_;
  bool elastic_ = false;
  double rho_ = 0.0;
};

// Damped Newton centering on phi(., mu). Returns the number of steps taken.
int center(const BarrierProblem& prob, VectorX<double>& z, double mu, double scale,
           int max_steps) {
  VectorX<double> g;
  MatrixX<double> h;
  int steps = 0;
  for (; steps < max_steps; ++steps) {
    prob.derivatives(z, mu, g, h);
    Eigen::LDLT<MatrixX<double>> ldlt(-h);
    VectorX<double> dz = ldlt.solve(g);
    if (!dz.allFinite()) break;
    const double decrement = g.dot(dz);
    if (!(decrement > 0.0) || 0.5 * decrement <= 1e-12 * scale) break;

    double step = 1.0;
    VectorX<double> trial = z + step * dz;
    while (!prob.strictly_feasible(trial) && step > 1e-16) {
      step *= 0.5;
      trial = z + step * dz;
    }
    const double phi0 = prob.phi(z, mu);
    while (step > 1e-16) {
      const double phi1 = prob.phi(trial, mu);
      if (std::isfinite(phi1) && phi1 >= phi0 + 0.25 * step * decrement) break;
      step *= 0.5;
      trial = z + step * dz;
    }
    if (step <= 1e-16) break;
    z = trial;
  }
  return steps;
}

}  // namespace

BarrierResult maximize_concave(const SmoothConcave& objective, const VectorX<double>& lower,
                               const VectorX<double>& upper,
                               const std::vector<QuadraticConstraint>& constraints,
                               const VectorX<double>& start, const BarrierOptions& options) {
  const Index n = start.size();
  if (lower.size() != n || upper.size() != n)
    throw ConfigError("barrier bounds must match the start dimension");
  if (!(upper.array() > lower.array()).all())
    throw ConfigError("barrier box must have positive width in every coordinate");

  BarrierProblem prob(objective, lower, upper, constraints);
  const VectorX<double> width = upper - lower;
  VectorX<double> x = start.cwiseMax(lower + options.interior_margin * width)
                          .cwiseMin(upper - options.interior_margin * width);

  double min_c = std::numeric_limits<double>::infinity();
  for (const auto& c : constraints) min_c = std::min(min_c, c.value(x));
  const bool elastic = !constraints.empty() && min_c <= kStrictSlack;
  prob.set_elastic(elastic);

  VectorX<double> z(prob.size());
  z.head(n) = x;
  if (elastic) {
    z(n) = std::max(0.0, -min_c) + 1e-3;
    VectorX<double> gf(n);
    MatrixX<double> hf(n, n);
    objective.derivatives(x, gf, hf);
    prob.rho() = 1e3 * (1.0 + gf.cwiseAbs().maxCoeff());
  }

  const double f0 = objective.value(x);
  const auto m = static_cast<double>(prob.barrier_count());
  double mu = 0.1 * (1.0 + std::abs(f0)) / m;

  BarrierResult result;
  int raises = 0;
  for (int stage = 0; stage < 200; ++stage) {
    const double scale = 1.0 + std::abs(prob.objective(z));
    result.newton_steps += center(prob, z, mu, scale, options.max_newton_per_stage);
    const bool gap_ok = m * mu <= options.tolerance * scale;
    const bool slack_ok = !elastic || prob.slack(z) <= options.feasibility_tolerance;
    if (gap_ok && slack_ok) {
      result.converged = true;
      break;
    }
    if (gap_ok) {
      if (raises >= options.max_penalty_raises) break;
      prob.rho() *= 100.0;
      ++raises;
      continue;
    }
    mu *= options.mu_factor;
  }

  result.x = z.head(n);
  result.objective = objective.value(result.x);
  result.max_violation = prob.violation(result.x);
  return result;
}

}  // namespace cfmimo
