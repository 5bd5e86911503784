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

#include "cfmimo/se_model.hpp"
#include "cfmimo/types.hpp"

#include <string_view>
#include <vector>

namespace cfmimo {

/// Immutable inputs of one problem instance.
struct ProblemData {
  ChannelStats<double> channel;
  SystemParams params;

  Index num_aps() const { return channel.num_aps(); }
  Index num_ues() const { return channel.num_ues(); }

  void validate() const {
    channel.validate();
    params.validate(channel.num_ues());
  }
};

enum class InfeasiblePolicy { error, report_and_continue };

InfeasiblePolicy parse_infeasible_policy(std::string_view name);
std::string_view to_string(InfeasiblePolicy policy);

struct SolverOptions {
  double epsilon = 5e-3;           // relative change of the association-block value
  int max_outer_iters = 100;
  double inner_tolerance = 1e-7;   // barrier duality gap, relative
  double rounding_threshold = 0.5;
  InfeasiblePolicy qos_infeasible_policy = InfeasiblePolicy::report_and_continue;
  bool repair_rounded_qos = true;  // greedy per-UE fix when rounding breaks QoS

  void validate() const;
};

/// Auxiliary variables of the fractional-programming transforms.
struct AuxState {
  VectorX<double> gamma_aux;  // Gamma_t
  VectorX<double> u;          // quadratic-transform multipliers
  VectorX<double> lambda;     // w' / (1 + Gamma_t), diagnostics only
};

struct FeasibilityReport {
  bool start_feasible = true;   // QoS held at the (possibly repaired) initial point
  bool prephase_used = false;
  Eigen::Array<bool, Eigen::Dynamic, 1> qos_relaxed;  // targets lowered to stay feasible
  Eigen::Array<bool, Eigen::Dynamic, 1> qos_met;      // on (eta_star, d_binary)

  bool feasible() const { return start_feasible && !qos_relaxed.any() && qos_met.all(); }
};

struct SolveResult {
  PowerVector eta_star;
  AssociationMatrix d_relaxed;
  AssociationMatrix d_binary;
  std::vector<double> objective_trace;  // association-block value per outer iteration
  std::vector<double> trace_seconds;    // elapsed time at each trace entry
  int iterations = 0;
  FeasibilityReport feasibility;
  double wall_time = 0.0;
};

/// Which blocks the alternating loop optimizes.
struct Blocks {
  bool power = true;
  bool association = true;
};

/// Diagnostics from a single block solve.
struct InnerReport {
  bool feasible = true;
  double max_violation = 0.0;
  int newton_steps = 0;
};

// --- auxiliary updates --------------------------------------------------

VectorX<double> update_gamma(const PowerVector& eta, const AssociationMatrix& d,
                             const ProblemData& data);
VectorX<double> lambda_star(const VectorX<double>& gamma_aux, const SystemParams& params);
VectorX<double> update_u(const VectorX<double>& gamma_aux, const PowerVector& eta,
                         const AssociationMatrix& d, const ProblemData& data);
/// Gamma = SINR, then u and lambda at that Gamma.
AuxState synchronize(const PowerVector& eta, const AssociationMatrix& d, const ProblemData& data);

// --- objectives ----------------------------------------------------------

/// Lagrangian-dual-transformed objective at fixed Gamma, u eliminated:
///   sum_t [w log2(1+G_t) - w' G_t + w'(1+G_t) sig_t/(sig_t+I_t)] - alpha sum d.
double dual_transform_objective(const PowerVector& eta, const AssociationMatrix& d,
                                const VectorX<double>& gamma_aux, const ProblemData& data);

/// Quadratic-transformed objective, concave in eta and in d separately:
///   sum_t [w log2(1+G_t) - w' G_t - u_t^2 (sig_t + I_t) + 2 u_t sqrt(w'(1+G_t) sig_t)]
///   - alpha sum d.
double block_objective(const PowerVector& eta, const AssociationMatrix& d, const AuxState& aux,
                       const ProblemData& data);

VectorX<double> block_gradient_eta(const PowerVector& eta, const AssociationMatrix& d,
                                   const AuxState& aux, const ProblemData& data);
MatrixX<double> block_gradient_d(const PowerVector& eta, const AssociationMatrix& d,
                                 const AuxState& aux, const ProblemData& data);

// --- block subproblems -----------------------------------------------------

/// Maximizes the block objective over eta in [0,1]^T with d fixed, subject to
/// QoS rewritten as A^2 p_u eta_t S_t^2 >= g_t I_t(eta) (linear in eta).
PowerVector solve_power(const AssociationMatrix& d, const PowerVector& eta_start,
                        const AuxState& aux, const ProblemData& data,
                        const SolverOptions& options, InnerReport* report = nullptr);

/// Maximizes the block objective over d in [0,1]^{M x T} with eta fixed,
/// subject to sum_m d_mt >= 1 and QoS. The problem separates per column.
AssociationMatrix solve_association(const PowerVector& eta, const AssociationMatrix& d_start,
                                    const AuxState& aux, const ProblemData& data,
                                    const SolverOptions& options, InnerReport* report = nullptr);

/// Alternating block ascent from a relaxed-feasible starting point, then rounding.
SolveResult alternate(const PowerVector& eta0, const AssociationMatrix& d0,
                      const ProblemData& data, const SolverOptions& options,
                      Blocks blocks = {});

/// Threshold rounding, then coverage restoration for empty columns
/// at the largest relaxed entry; ties go to the larger gamma_mt, then the lower AP.
AssociationMatrix round_association(const AssociationMatrix& d_relaxed,
                                    const SolverOptions& options, const ProblemData& data);

/// Greedy single-entry flips on the columns of UEs whose QoS fails after
/// rounding. Other UEs are unaffected because SE_t only depends on column t.
AssociationMatrix repair_qos(const PowerVector& eta, const AssociationMatrix& d_binary,
                             const ProblemData& data);

/// Smallest power vector meeting every QoS target for fixed d (standard
/// interference-function iteration), scaled up so its largest entry is 1.
/// Returns an empty vector if the targets are not reachable within [0,1]^T.
PowerVector min_power_for_qos(const AssociationMatrix& d, const ProblemData& data);

/// Largest |second central difference| of the smooth part of the dual-transform
/// objective (Gamma held at the SINR of (eta, d)) over all d_mt.
double curvature_probe(const PowerVector& eta, const AssociationMatrix& d,
                       const ProblemData& data, double step = 1e-4);

}  // namespace cfmimo
