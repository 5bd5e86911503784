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

#include "cfmimo/pilots.hpp"
#include "cfmimo/se_model.hpp"
#include "cfmimo/types.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace cfmimo {

/// Sample statistics of simulated MMSE channel estimates.
struct EstimateStats {
  MatrixX<double> gamma_hat;             // mean ||g_hat_mt||^2 / A
  MatrixX<double> gamma_stderr;
  MatrixX<double> orthogonality;         // mean Re(g_hat^H (g - g_hat)) / A, should vanish
  MatrixX<double> orthogonality_stderr;
  Index samples = 0;
};

/// Simulates pilot reception y_m = sqrt(p_p L_p) sum_t g_mt psi_t^T + n_m with
/// canonical-basis pilots and forms the MMSE estimates.
EstimateStats sample_estimates(const LsfcMatrix& beta, const PilotAssignment& pilots,
                               Index antennas, Index n_samples, std::uint64_t seed);

/// Empirical expectations of the SINR terms under MR combining with binary d.
struct EmpiricalTerms {
  InterferenceTerms<double> mean;
  InterferenceTerms<double> std_error;
  Index samples = 0;
};

EmpiricalTerms empirical_sinr_terms(const PowerVector& eta, const AssociationMatrix& d_binary,
                                    const LsfcMatrix& beta, const PilotAssignment& pilots,
                                    const SystemParams& params, Index n_samples,
                                    std::uint64_t seed);

struct ComparisonRow {
  std::string term;  // gamma, signal, pilot_contamination, beamforming_uncertainty, noise
  std::string index;
  double closed_form = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double z = 0.0;

  bool within(double sigmas) const { return std::abs(z) <= sigmas; }
};

std::vector<ComparisonRow> compare_estimates(const MatrixX<double>& gamma,
                                             const EstimateStats& stats);
std::vector<ComparisonRow> compare_terms(const InterferenceTerms<double>& closed,
                                         const EmpiricalTerms& empirical);

/// Columns: term, index, closed_form, empirical, stderr, z.
void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows);

}  // namespace cfmimo
