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
#include "cfmimo/random.hpp"
#include "cfmimo/types.hpp"

#include <string_view>
#include <vector>

namespace cfmimo {

enum class PilotStrategy { round_robin, random };

PilotStrategy parse_pilot_strategy(std::string_view name);
std::string_view to_string(PilotStrategy strategy);

struct PilotAssignment {
  std::vector<Index> pilot_of;  // one index in [0, pilot_length) per UE
  Index pilot_length = 1;       // L_p
  double p_p = 1.0;             // normalized pilot SNR

  void validate() const;
};

PilotAssignment assign_pilots(Index num_ues, Index pilot_length, double p_p,
                              PilotStrategy strategy, Rng& rng);

/// |psi_t^H psi_t'|^2 for an orthonormal reused pilot book.
PilotGram pilot_gram(const PilotAssignment& assignment);

/// MMSE estimate mean-square per antenna:
///   gamma_mt = p_p L_p beta_mt^2 / (sum_t' p_p L_p beta_mt' |psi_t^H psi_t'|^2 + 1)
template <typename Scalar>
MatrixX<Scalar> estimation_quality(const MatrixX<Scalar>& beta, const MatrixX<Scalar>& gram,
                                   Scalar p_p, Index pilot_length) {
  if (gram.rows() != beta.cols() || gram.cols() != beta.cols())
    throw ConfigError("pilot gram must be T x T for a beta of M x T");
  if (!(p_p > Scalar(0)) || pilot_length < 1)
    throw ConfigError("estimation quality requires p_p > 0 and L_p >= 1");
  const Scalar scale = p_p * static_cast<Scalar>(pilot_length);
  // denom(m, t) = scale * sum_t' beta(m, t') gram(t', t) + 1
  const MatrixX<Scalar> denom = (scale * beta * gram).array() + Scalar(1);
  return (scale * beta.array().square() / denom.array()).matrix();
}

}  // namespace cfmimo
