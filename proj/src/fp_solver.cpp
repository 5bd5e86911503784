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

#include "cfmimo/fp_solver.hpp"

#include "cfmimo/barrier.hpp"
#include "cfmimo/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace cfmimo {

InfeasiblePolicy parse_infeasible_policy(std::string_view name) {
  if (name == "error") return InfeasiblePolicy::error;
  if (name == "report_and_continue") return InfeasiblePolicy::report_and_continue;
  throw ConfigError("unknown qos_infeasible_policy: " + std::string(name));
}

std::string_view to_string(InfeasiblePolicy policy) {
  return policy == InfeasiblePolicy::error ? "error" : "report_and_continue";
}

void SolverOptions::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (max_outer_iters < 1) throw ConfigError("max_outer_iters must be at least 1");
  if (!(inner_tolerance > 0.0)) throw ConfigError("inner_tolerance must be positive");
  if (!(rounding_threshold > 0.0 && rounding_threshold < 1.0))
    throw ConfigError("rounding_threshold must lie in (0, 1)");
}

namespace {

constexpr double kConstraintTolerance = 1e-8;

/// Interference coupling for fixed d: I_t(eta) = sum_s K(t, s) eta_s + N_t.
struct Coupling {
  MatrixX<double> k;           // T x T
  VectorX<double> noise;       // N_t = A S_t
  VectorX<double> signal;      // A^2 p_u S_t^2, so sig_t = signal_t * eta_t
};

Coupling make_coupling(const AssociationMatrix& d, const ProblemData& data) {
  const auto& ch = data.channel;
  const double a = static_cast<double>(data.params.antennas);
  const double pu = data.params.p_u;
  const MatrixX<double> dg = d.cwiseProduct(ch.gamma);
  const VectorX<double> gain = dg.colwise().sum().transpose();
  const MatrixX<double> cross = cross_gains(d, ch);

  Coupling c;
  // contam(s, t) = |psi_t^H psi_s|^2 C(s, t)^2
  MatrixX<double> contam = (ch.gram.transpose().array() * cross.array().square()).matrix();
  contam.diagonal().setZero();
  c.k = a * a * pu * contam.transpose() + a * pu * dg.transpose() * ch.beta;
  c.noise = a * gain;
  c.signal = a * a * pu * gain.cwiseAbs2();
  return c;
}

/// Block objective restricted to eta: constant + sum_s a_s sqrt(eta_s) - b_s eta_s.
struct PowerBlock {
  Coupling coupling;
  VectorX<double> sqrt_coeff;
  VectorX<double> linear;
  double constant = 0.0;

  double value(const VectorX<double>& eta) const {
    return constant + sqrt_coeff.dot(eta.cwiseSqrt()) - linear.dot(eta);
  }
};

double transform_constant(const VectorX<double>& gamma_aux, const SystemParams& p) {
  const double wn = p.prelog_nats();
  double acc = 0.0;
  for (Index t = 0; t < gamma_aux.size(); ++t)
    acc += p.prelog * std::log2(1.0 + gamma_aux(t)) - wn * gamma_aux(t);
  return acc;
}

// 2 u_t sqrt(w' (1 + Gamma_t)) A sqrt(p_u); the square-root term is this times sqrt(eta_t) S_t.
VectorX<double> root_coeff(const AuxState& aux, const SystemParams& p) {
  const double wn = p.prelog_nats();
  const double scale = 2.0 * static_cast<double>(p.antennas) * std::sqrt(p.p_u);
  return scale * aux.u.cwiseProduct(((1.0 + aux.gamma_aux.array()) * wn).sqrt().matrix());
}

PowerBlock make_power_block(const AssociationMatrix& d, const AuxState& aux,
                            const ProblemData& data) {
  PowerBlock blk;
  blk.coupling = make_coupling(d, data);
  const VectorX<double> gain = d.cwiseProduct(data.channel.gamma).colwise().sum().transpose();
  const VectorX<double> u2 = aux.u.cwiseAbs2();
  blk.sqrt_coeff = root_coeff(aux, data.params).cwiseProduct(gain);
  blk.linear = u2.cwiseProduct(blk.coupling.signal) + blk.coupling.k.transpose() * u2;
  blk.constant = transform_constant(aux.gamma_aux, data.params) -
                 data.params.alpha * d.sum() - u2.dot(blk.coupling.noise);
  return blk;
}

/// Block objective restricted to column t of d: p . x - x^T H x (plus a
/// constant shared by all columns).
struct ColumnBlock {
  VectorX<double> p;
  MatrixX<double> h;
  // Pieces of I_t(x) = x^T q_int x + ell . x and sig_t(x) = sig_coeff (gamma . x)^2.
  MatrixX<double> q_int;
  VectorX<double> ell;
  VectorX<double> gamma;
  double sig_coeff = 0.0;

  double value(const VectorX<double>& x) const { return p.dot(x) - x.dot(h * x); }
  double signal(const VectorX<double>& x) const {
    const double s = gamma.dot(x);
    return sig_coeff * s * s;
  }
  double interference(const VectorX<double>& x) const { return x.dot(q_int * x) + ell.dot(x); }
};

ColumnBlock make_column_block(Index t, const PowerVector& eta, const AuxState& aux,
                              const ProblemData& data) {
  const auto& ch = data.channel;
  const auto& prm = data.params;
  const double a = static_cast<double>(prm.antennas);
  const double pu = prm.p_u;
  const Index m = ch.num_aps();

  ColumnBlock blk;
  blk.gamma = ch.gamma.col(t);
  blk.sig_coeff = a * a * pu * eta(t);
  blk.ell = a * pu * blk.gamma.cwiseProduct(ch.beta * eta) + a * blk.gamma;

  // Rows of r_t'(m) = gamma_mt beta_mt' / beta_mt scaled by sqrt(kappa_t').
  const VectorX<double> ratio = blk.gamma.cwiseQuotient(ch.beta.col(t));
  MatrixX<double> weighted(m, ch.num_ues());
  for (Index s = 0; s < ch.num_ues(); ++s) {
    const double kappa = s == t ? 0.0 : a * a * pu * eta(s) * ch.gram(t, s);
    weighted.col(s) = std::sqrt(kappa) * ratio.cwiseProduct(ch.beta.col(s));
  }
  blk.q_int = weighted * weighted.transpose();

  const double u2 = aux.u(t) * aux.u(t);
  const double root = root_coeff(aux, prm)(t) * std::sqrt(eta(t));
  blk.p = root * blk.gamma - prm.alpha * VectorX<double>::Ones(m) - u2 * blk.ell;
  blk.h = u2 * (blk.sig_coeff * blk.gamma * blk.gamma.transpose() + blk.q_int);
  return blk;
}

// Concave inner restriction of sig(x) >= g I(x): the convex signal term is
// replaced by its tangent at x0, normalized by g I(x0).
QuadraticConstraint qos_restriction(const ColumnBlock& blk, double target,
                                    const VectorX<double>& x0) {
  const double s0 = blk.gamma.dot(x0);
  const double i0 = blk.interference(x0);
  const double norm = target * i0;
  QuadraticConstraint c;
  c.offset = -blk.sig_coeff * s0 * s0 / norm;
  c.linear = (2.0 * blk.sig_coeff * s0 * blk.gamma - target * blk.ell) / norm;
  c.quad = blk.q_int / i0;
  return c;
}

bool column_qos_ok(const ColumnBlock& blk, double target, const VectorX<double>& x) {
  if (target <= 0.0) return true;
  const double interference = blk.interference(x);
  return blk.signal(x) >= target * interference * (1.0 - 1e-9);
}

std::vector<QuadraticConstraint> power_qos_constraints(const Coupling& c,
                                                       const VectorX<double>& targets) {
  std::vector<QuadraticConstraint> out;
  for (Index t = 0; t < targets.size(); ++t) {
    if (!(targets(t) > 0.0)) continue;
    QuadraticConstraint q;
    q.offset = -1.0;
    q.linear = -c.k.row(t).transpose() / c.noise(t);
    q.linear(t) += c.signal(t) / (targets(t) * c.noise(t));
    out.push_back(std::move(q));
  }
  return out;
}

double max_violation(const std::vector<QuadraticConstraint>& cons, const VectorX<double>& x) {
  double worst = 0.0;
  for (const auto& c : cons) worst = std::max(worst, -c.value(x));
  return worst;
}

BarrierOptions barrier_options(const SolverOptions& options) {
  BarrierOptions b;
  b.tolerance = options.inner_tolerance;
  return b;
}

}  // namespace

VectorX<double> update_gamma(const PowerVector& eta, const AssociationMatrix& d,
                             const ProblemData& data) {
  return sinr_terms(eta, d, data.channel, data.params).sinr();
}

VectorX<double> lambda_star(const VectorX<double>& gamma_aux, const SystemParams& params) {
  return (params.prelog_nats() / (1.0 + gamma_aux.array())).matrix();
}

VectorX<double> update_u(const VectorX<double>& gamma_aux, const PowerVector& eta,
                         const AssociationMatrix& d, const ProblemData& data) {
  const auto terms = sinr_terms(eta, d, data.channel, data.params);
  const double wn = data.params.prelog_nats();
  const VectorX<double> total = terms.signal + terms.interference();
  return ((wn * (1.0 + gamma_aux.array()) * terms.signal.array()).sqrt() / total.array())
      .matrix();
}

AuxState synchronize(const PowerVector& eta, const AssociationMatrix& d, const ProblemData& data) {
  AuxState aux;
  aux.gamma_aux = update_gamma(eta, d, data);
  aux.u = update_u(aux.gamma_aux, eta, d, data);
  aux.lambda = lambda_star(aux.gamma_aux, data.params);
  return aux;
}

double dual_transform_objective(const PowerVector& eta, const AssociationMatrix& d,
                                const VectorX<double>& gamma_aux, const ProblemData& data) {
  const auto terms = sinr_terms(eta, d, data.channel, data.params);
  const double wn = data.params.prelog_nats();
  const VectorX<double> total = terms.signal + terms.interference();
  const double ratio =
      (wn * (1.0 + gamma_aux.array()) * terms.signal.array() / total.array()).sum();
  return transform_constant(gamma_aux, data.params) + ratio - data.params.alpha * d.sum();
}

double block_objective(const PowerVector& eta, const AssociationMatrix& d, const AuxState& aux,
                       const ProblemData& data) {
  const auto terms = sinr_terms(eta, d, data.channel, data.params);
  const double wn = data.params.prelog_nats();
  double acc = transform_constant(aux.gamma_aux, data.params) - data.params.alpha * d.sum();
  for (Index t = 0; t < eta.size(); ++t) {
    const double sig = terms.signal(t);
    const double total = sig + terms.pilot_contamination(t) +
                         terms.beamforming_uncertainty(t) + terms.noise(t);
    acc += 2.0 * aux.u(t) * std::sqrt(wn * (1.0 + aux.gamma_aux(t)) * sig) -
           aux.u(t) * aux.u(t) * total;
  }
  return acc;
}

VectorX<double> block_gradient_eta(const PowerVector& eta, const AssociationMatrix& d,
                                   const AuxState& aux, const ProblemData& data) {
  const PowerBlock blk = make_power_block(d, aux, data);
  return (0.5 * blk.sqrt_coeff.array() / eta.array().sqrt() - blk.linear.array()).matrix();
}

MatrixX<double> block_gradient_d(const PowerVector& eta, const AssociationMatrix& d,
                                 const AuxState& aux, const ProblemData& data) {
  MatrixX<double> grad(d.rows(), d.cols());
  for (Index t = 0; t < d.cols(); ++t) {
    const ColumnBlock blk = make_column_block(t, eta, aux, data);
    grad.col(t) = blk.p - 2.0 * (blk.h * d.col(t));
  }
  return grad;
}

PowerVector solve_power(const AssociationMatrix& d, const PowerVector& eta_start,
                        const AuxState& aux, const ProblemData& data,
                        const SolverOptions& options, InnerReport* report) {
  const PowerBlock blk = make_power_block(d, aux, data);
  const auto cons = power_qos_constraints(blk.coupling, data.params.sinr_targets());
  const Index n = eta_start.size();

  // The constant shifts the value but not the argmax; leaving it out keeps
  // the barrier's relative stopping rule independent of alpha.
  SmoothConcave f;
  f.value = [&blk](const VectorX<double>& x) { return blk.value(x) - blk.constant; };
  f.derivatives = [&blk](const VectorX<double>& x, VectorX<double>& g, MatrixX<double>& h) {
    const VectorX<double> root = x.cwiseSqrt();
    g = (0.5 * blk.sqrt_coeff.array() / root.array() - blk.linear.array()).matrix();
    h.setZero(x.size(), x.size());
    h.diagonal() = (-0.25 * blk.sqrt_coeff.array() / (x.array() * root.array())).matrix();
  };

  const BarrierResult res = maximize_concave(f, VectorX<double>::Zero(n),
                                             VectorX<double>::Ones(n), cons, eta_start,
                                             barrier_options(options));
  const bool feasible = res.max_violation <= kConstraintTolerance;
  const bool start_feasible = max_violation(cons, eta_start) <= kConstraintTolerance;
  if (report) {
    report->feasible = feasible || start_feasible;
    report->max_violation = feasible ? res.max_violation : max_violation(cons, eta_start);
    report->newton_steps = res.newton_steps;
  }
  if (start_feasible && (!feasible || blk.value(eta_start) >= blk.value(res.x))) return eta_start;
  if (!feasible && options.qos_infeasible_policy == InfeasiblePolicy::error)
    throw InfeasibleInstance("power subproblem has no QoS-feasible point");
  return res.x;
}

AssociationMatrix solve_association(const PowerVector& eta, const AssociationMatrix& d_start,
                                    const AuxState& aux, const ProblemData& data,
                                    const SolverOptions& options, InnerReport* report) {
  const Index m = d_start.rows();
  const VectorX<double> targets = data.params.sinr_targets();
  const VectorX<double> lower = VectorX<double>::Zero(m);
  const VectorX<double> upper = VectorX<double>::Ones(m);
  QuadraticConstraint coverage;
  coverage.offset = -1.0;
  coverage.linear = VectorX<double>::Ones(m);

  AssociationMatrix d = d_start;
  InnerReport total;
  for (Index t = 0; t < d.cols(); ++t) {
    const ColumnBlock blk = make_column_block(t, eta, aux, data);
    SmoothConcave f;
    f.value = [&blk](const VectorX<double>& x) { return blk.value(x); };
    f.derivatives = [&blk](const VectorX<double>& x, VectorX<double>& g, MatrixX<double>& h) {
      g = blk.p - 2.0 * (blk.h * x);
      h = -2.0 * blk.h;
    };

    const VectorX<double> x0 = d_start.col(t);
    const double target = targets(t);
    const bool with_qos = target > 0.0 && blk.sig_coeff > 0.0;
    const bool start_ok = coverage.value(x0) >= -kConstraintTolerance &&
                          (x0.array() >= 0.0).all() && (x0.array() <= 1.0).all() &&
                          column_qos_ok(blk, target, x0);

    std::vector<QuadraticConstraint> cons{coverage};
    if (with_qos) cons.push_back(qos_restriction(blk, target, x0));
    BarrierResult res = maximize_concave(f, lower, upper, cons, x0, barrier_options(options));
    total.newton_steps += res.newton_steps;

    // Re-linearize the QoS restriction at the new point while it is active.
    for (int round = 0; with_qos && round < 3; ++round) {
      if (res.max_violation > kConstraintTolerance || cons.back().value(res.x) > 1e-4) break;
      cons.back() = qos_restriction(blk, target, res.x);
      BarrierResult next =
          maximize_concave(f, lower, upper, cons, res.x, barrier_options(options));
      total.newton_steps += next.newton_steps;
      if (next.max_violation > kConstraintTolerance || next.objective <= res.objective) break;
      res = std::move(next);
    }

    const bool ok = res.max_violation <= kConstraintTolerance &&
                    (target <= 0.0 || column_qos_ok(blk, target, res.x));
    if (start_ok && (!ok || blk.value(x0) >= blk.value(res.x))) continue;
    if (!ok) {
      total.feasible = false;
      total.max_violation = std::max(total.max_violation, res.max_violation);
      if (options.qos_infeasible_policy == InfeasiblePolicy::error)
        throw InfeasibleInstance("association subproblem infeasible for UE " + std::to_string(t));
    }
    d.col(t) = res.x;
  }
  if (report) *report = total;
  return d;
}

AssociationMatrix round_association(const AssociationMatrix& d_relaxed,
                                    const SolverOptions& options, const ProblemData& data) {
  AssociationMatrix out =
      (d_relaxed.array() >= options.rounding_threshold).cast<double>().matrix();
  const auto& gamma = data.channel.gamma;
  for (Index t = 0; t < out.cols(); ++t) {
    if (out.col(t).sum() > 0.0) continue;
    Index best = 0;
    for (Index m = 1; m < out.rows(); ++m) {
      const double dv = d_relaxed(m, t), db = d_relaxed(best, t);
      if (dv > db || (dv == db && gamma(m, t) > gamma(best, t))) best = m;
    }
    out(best, t) = 1.0;
  }
  return out;
}

AssociationMatrix repair_qos(const PowerVector& eta, const AssociationMatrix& d_binary,
                             const ProblemData& data) {
  AssociationMatrix d = d_binary;
  const auto& ch = data.channel;
  const auto& prm = data.params;
  const auto column_se = [&](Index t, const VectorX<double>& col) {
    return prm.prelog * std::log2(1.0 + column_terms(t, eta, col, ch, prm).sinr());
  };
  for (Index t = 0; t < d.cols(); ++t) {
    VectorX<double> col = d.col(t);
    double current = column_se(t, col);
    for (Index step = 0; step < 2 * d.rows() && current < prm.qos(t) - kQosTolerance; ++step) {
      Index best = -1;
      double best_se = current;
      for (Index m = 0; m < d.rows(); ++m) {
        col(m) = 1.0 - col(m);
        if (col.sum() > 0.0) {
          const double v = column_se(t, col);
          if (v > best_se + 1e-12) {
            best_se = v;
            best = m;
          }
        }
        col(m) = 1.0 - col(m);
      }
      if (best < 0) break;
      col(best) = 1.0 - col(best);
      current = best_se;
    }
    d.col(t) = col;
  }
  return d;
}

PowerVector min_power_for_qos(const AssociationMatrix& d, const ProblemData& data) {
  const Coupling c = make_coupling(d, data);
  const VectorX<double> targets = data.params.sinr_targets();
  const Index n = targets.size();
  VectorX<double> eta = VectorX<double>::Zero(n);
  bool converged = false;
  for (int it = 0; it < 20000; ++it) {
    VectorX<double> next = targets.cwiseProduct(c.k * eta + c.noise).cwiseQuotient(c.signal);
    if (!next.allFinite() || next.maxCoeff() > 1e3) return {};
    const double change = (next - eta).cwiseAbs().maxCoeff();
    eta = std::move(next);
    if (change <= 1e-14 * (1.0 + eta.cwiseAbs().maxCoeff())) {
      converged = true;
      break;
    }
  }
  if (!converged || eta.maxCoeff() > 1.0) return {};
  const double peak = eta.maxCoeff();
  if (peak <= 0.0) return VectorX<double>::Ones(n);
  return eta / peak;
}

namespace {

// Per-UE best binary column for fixed eta: best prefix of APs ranked by gamma.
VectorX<double> best_prefix_column(Index t, const PowerVector& eta, const ProblemData& data) {
  const Index m = data.num_aps();
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  const auto& gamma = data.channel.gamma;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return gamma(i, t) > gamma(j, t); });
  VectorX<double> col = VectorX<double>::Zero(m);
  VectorX<double> best;
  double best_sinr = -1.0;
  for (Index k : order) {
    col(k) = 1.0;
    const double s = column_terms(t, eta, col, data.channel, data.params).sinr();
    if (s > best_sinr) {
      best_sinr = s;
      best = col;
    }
  }
  return best;
}

bool qos_ok(const PowerVector& eta, const AssociationMatrix& d, const ProblemData& data) {
  return qos_satisfied(eta, d, data.channel, data.params).all();
}

}  // namespace

SolveResult alternate(const PowerVector& eta0, const AssociationMatrix& d0,
                      const ProblemData& data, const SolverOptions& options, Blocks blocks) {
  data.validate();
  options.validate();
  const auto clock_start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  };

  const Index n_ues = data.num_ues();
  PowerVector eta = eta0;
  AssociationMatrix d = d0;
  SolveResult result;
  result.feasibility.qos_relaxed = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n_ues, false);

  // Feasible initialization.
  ProblemData work = data;
  if (!qos_ok(eta, d, work)) {
    result.feasibility.prephase_used = true;
    for (int round = 0; round < 3 && !qos_ok(eta, d, work); ++round) {
      if (blocks.power) {
        const PowerVector candidate = min_power_for_qos(d, work);
        if (candidate.size() > 0 && qos_ok(candidate, d, work)) {
          eta = candidate;
          break;
        }
      }
      if (blocks.association) {
        const auto met = qos_satisfied(eta, d, work.channel, work.params);
        for (Index t = 0; t < n_ues; ++t) {
          if (!met(t)) d.col(t) = best_prefix_column(t, eta, work);
        }
      }
    }
    if (!qos_ok(eta, d, work)) {
      if (options.qos_infeasible_policy == InfeasiblePolicy::error)
        throw InfeasibleInstance("no QoS-feasible starting point found");
      result.feasibility.start_feasible = false;
      const VectorX<double> se_start = spectral_efficiency(eta, d, work.channel, work.params);
      for (Index t = 0; t < n_ues; ++t) {
        if (se_start(t) < work.params.qos(t) - kQosTolerance) {
          work.params.qos(t) = std::max(0.0, se_start(t));
          result.feasibility.qos_relaxed(t) = true;
        }
      }
    }
  }

  double previous = 0.0;
  for (int iter = 1; iter <= options.max_outer_iters; ++iter) {
    AuxState aux;
    if (blocks.power) {
      aux = synchronize(eta, d, work);
      eta = solve_power(d, eta, aux, work, options);
    }
    if (blocks.association || !blocks.power) {
      aux = synchronize(eta, d, work);
      if (blocks.association) d = solve_association(eta, d, aux, work, options);
    }
    const double value = block_objective(eta, d, aux, work);
    result.objective_trace.push_back(value);
    result.trace_seconds.push_back(elapsed());
    result.iterations = iter;
    if (iter > 1 && std::abs(value - previous) <= options.epsilon * std::abs(previous)) break;
    if (!blocks.power && !blocks.association) break;
    previous = value;
  }

  result.eta_star = eta;
  result.d_relaxed = d;
  result.d_binary = round_association(d, options, data);
  if (options.repair_rounded_qos && !qos_ok(eta, result.d_binary, data))
    result.d_binary = repair_qos(eta, result.d_binary, data);
  result.feasibility.qos_met = qos_satisfied(eta, result.d_binary, data.channel, data.params);
  result.wall_time = elapsed();
  return result;
}

double curvature_probe(const PowerVector& eta, const AssociationMatrix& d,
                       const ProblemData& data, double step) {
  const VectorX<double> gamma_aux = update_gamma(eta, d, data);
  const double wn = data.params.prelog_nats();
  double worst = 0.0;
  for (Index t = 0; t < d.cols(); ++t) {
    const auto ratio = [&](const VectorX<double>& col) {
      const auto b = column_terms(t, eta, col, data.channel, data.params);
      return wn * (1.0 + gamma_aux(t)) * b.signal / (b.signal + b.interference());
    };
    VectorX<double> col = d.col(t);
    const double center = ratio(col);
    for (Index m = 0; m < d.rows(); ++m) {
      const double keep = col(m);
      col(m) = keep + step;
      const double up = ratio(col);
      col(m) = keep - step;
      const double down = ratio(col);
      col(m) = keep;
      worst = std::max(worst, std::abs((up - 2.0 * center + down) / (step * step)));
    }
  }
  return worst;
}

}  // namespace cfmimo
