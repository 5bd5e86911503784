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

#include "cfmimo/baselines.hpp"

#include "cfmimo/errors.hpp"

#include <cmath>
#include <string>

namespace cfmimo {

void Scenario::validate() const {
  if (!std::isfinite(fpc_exponent)) throw ConfigError("fpc_exponent must be finite");
}

ScenarioKind parse_scenario(std::string_view name) {
  if (name == "a" || name == "full_power_all_serve") return ScenarioKind::full_power_all_serve;
  if (name == "b" || name == "fractional_power_control")
    return ScenarioKind::fractional_power_control;
  if (name == "c" || name == "power_only") return ScenarioKind::power_only;
  if (name == "d" || name == "association_only") return ScenarioKind::association_only;
  if (name == "joint") return ScenarioKind::joint;
  throw ConfigError("unknown scenario: " + std::string(name));
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::full_power_all_serve: return "full_power_all_serve";
    case ScenarioKind::fractional_power_control: return "fractional_power_control";
    case ScenarioKind::power_only: return "power_only";
    case ScenarioKind::association_only: return "association_only";
    case ScenarioKind::joint: return "joint";
  }
  return "joint";
}

bool enforces_qos(ScenarioKind kind) {
  return kind == ScenarioKind::association_only || kind == ScenarioKind::joint;
}

PowerVector fractional_power_control(const LsfcMatrix& beta, double nu) {
  if (beta.size() == 0) throw ConfigError("fractional power control needs a nonempty beta");
  const VectorX<double> total = beta.colwise().sum().transpose();
  if ((total.array() <= 0.0).any()) throw ConfigError("every UE needs a positive LSFC sum");
  // Work in logs so tiny LSFC sums do not underflow before normalization.
  const VectorX<double> log_power = 2.0 * nu * total.array().log();
  return (log_power.array() - log_power.maxCoeff()).exp().matrix();
}

SolveResult evaluate_fixed(const PowerVector& eta, const AssociationMatrix& d,
                           const ProblemData& data) {
  data.validate();
  SolveResult r;
  r.eta_star = eta;
  r.d_relaxed = d;
  r.d_binary = d;
  r.feasibility.qos_relaxed =
      Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(data.num_ues(), false);
  r.feasibility.qos_met = qos_satisfied(eta, d, data.channel, data.params);
  return r;
}

SolveResult run_scenario(const Scenario& scenario, const ProblemData& data,
                         const SolverOptions& options) {
  scenario.validate();
  const Index m = data.num_aps();
  const Index t = data.num_ues();
  const PowerVector full = PowerVector::Ones(t);
  const AssociationMatrix all = AssociationMatrix::Ones(m, t);

  switch (scenario.kind) {
    case ScenarioKind::full_power_all_serve:
      return evaluate_fixed(full, all, data);
    case ScenarioKind::fractional_power_control:
      return evaluate_fixed(fractional_power_control(data.channel.beta, scenario.fpc_exponent),
                            all, data);
    case ScenarioKind::power_only: {
      ProblemData relaxed = data;
      relaxed.params.qos.setZero();
      SolveResult r = alternate(full, all, relaxed, options, Blocks{true, false});
      r.feasibility.qos_met = qos_satisfied(r.eta_star, r.d_binary, data.channel, data.params);
      return r;
    }
    case ScenarioKind::association_only:
      return alternate(full, all, data, options, Blocks{false, true});
    case ScenarioKind::joint:
      return alternate(full, all, data, options, Blocks{true, true});
  }
  throw ConfigError("unhandled scenario");
}

}  // namespace cfmimo
