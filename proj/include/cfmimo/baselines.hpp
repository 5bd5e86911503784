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

#include "cfmimo/fp_solver.hpp"
#include "cfmimo/types.hpp"

#include <string_view>

namespace cfmimo {

enum class ScenarioKind {
  full_power_all_serve,      // a
  fractional_power_control,  // b
  power_only,                // c
  association_only,          // d
  joint
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::joint;
  double fpc_exponent = -0.5;

  void validate() const;
};

/// Accepts the canonical names and the single letters a-d.
ScenarioKind parse_scenario(std::string_view name);
std::string_view to_string(ScenarioKind kind);

/// Whether the scenario enforces the per-UE QoS targets.
bool enforces_qos(ScenarioKind kind);

/// eta_t = (sum_m beta_mt)^(2 nu) normalized so the largest entry is 1.
PowerVector fractional_power_control(const LsfcMatrix& beta, double nu);

/// Packages a fixed (eta, d) as a solver result with no iterations.
SolveResult evaluate_fixed(const PowerVector& eta, const AssociationMatrix& d,
                           const ProblemData& data);

SolveResult run_scenario(const Scenario& scenario, const ProblemData& data,
                         const SolverOptions& options);

}  // namespace cfmimo
