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

#include "cfmimo/pilots.hpp"

#include <string>

namespace cfmimo {

PilotStrategy parse_pilot_strategy(std::string_view name) {
  if (name == "round_robin") return PilotStrategy::round_robin;
  if (name == "random") return PilotStrategy::random;
  throw ConfigError("unknown pilot strategy: " + std::string(name));
}

std::string_view to_string(PilotStrategy strategy) {
  return strategy == PilotStrategy::round_robin ? "round_robin" : "random";
}

void PilotAssignment::validate() const {
  if (pilot_length < 1) throw ConfigError("pilot length must be at least 1");
  if (!(p_p > 0.0)) throw ConfigError("pilot SNR must be positive");
  for (Index p : pilot_of) {
    if (p < 0 || p >= pilot_length) throw ConfigError("pilot index out of range");
  }
}

PilotAssignment assign_pilots(Index num_ues, Index pilot_length, double p_p,
                              PilotStrategy strategy, Rng& rng) {
  if (num_ues < 1) throw ConfigError("need at least one UE");
  PilotAssignment out;
  out.pilot_length = pilot_length;
  out.p_p = p_p;
  out.validate();
  out.pilot_of.resize(static_cast<std::size_t>(num_ues));
  std::uniform_int_distribution<Index> pick(0, pilot_length - 1);
  for (Index t = 0; t < num_ues; ++t) {
    out.pilot_of[static_cast<std::size_t>(t)] =
        strategy == PilotStrategy::round_robin ? t % pilot_length : pick(rng);
  }
  return out;
}

PilotGram pilot_gram(const PilotAssignment& assignment) {
  assignment.validate();
  const auto n = static_cast<Index>(assignment.pilot_of.size());
  PilotGram gram(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      gram(i, j) = assignment.pilot_of[static_cast<std::size_t>(i)] ==
                           assignment.pilot_of[static_cast<std::size_t>(j)]
                       ? 1.0
                       : 0.0;
    }
  }
  return gram;
}

}  // namespace cfmimo
