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

#include "cfmimo/types.hpp"

#include <functional>
#include <vector>

namespace cfmimo {

/// c(x) = offset + linear . x - x^T quad x >= 0, with quad symmetric PSD
/// (an empty quad means the constraint is linear). Concave by construction.
struct QuadraticConstraint {
  double offset = 0.0;
  VectorX<double> linear;
  MatrixX<double> quad;

  double value(const VectorX<double>& x) const;
  VectorX<double> gradient(const VectorX<double>& x) const;
};

/// Smooth concave objective with analytic first and second derivatives.
struct SmoothConcave {
  std::function<double(const VectorX<double>&)> value;
  std::function<void(const VectorX<double>&, VectorX<double>&, MatrixX<double>&)> derivatives;
};

struct BarrierOptions {
  double tolerance = 1e-7;       // target duality gap, relative to 1 + |f|
  double interior_margin = 1e-5;  // fraction of the box width used to pull the start inside
  double mu_factor = 0.1;
  int max_newton_per_stage = 80;
  int max_penalty_raises = 6;
  double feasibility_tolerance = 1e-9;
};

struct BarrierResult {
  VectorX<double> x;
  double objective = 0.0;
  double max_violation = 0.0;  // max(0, -min_i c_i(x))
  int newton_steps = 0;
  bool converged = false;
};

/// Maximizes a concave f over {lower <= x <= upper} intersected with concave
/// constraints c_i(x) >= 0, starting from `start`.
///
/// The start does not need to be strictly feasible for the general
/// constraints: when it is not, an elastic slack s >= 0 is added (c_i + s >= 0)
/// with an exact penalty on s that is raised until s vanishes.
BarrierResult maximize_concave(const SmoothConcave& objective, const VectorX<double>& lower,
                               const VectorX<double>& upper,
                               const std::vector<QuadraticConstraint>& constraints,
                               const VectorX<double>& start, const BarrierOptions& options = {});

}  // namespace cfmimo
