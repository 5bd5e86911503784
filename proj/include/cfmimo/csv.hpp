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

#include <string>

namespace cfmimo {

/// Shortest text that round-trips a double exactly.
std::string format_double(double value);

/// Rows are APs and columns are UEs; there is no header.
void write_matrix_csv(const std::string& path, const MatrixX<double>& matrix);
MatrixX<double> read_matrix_csv(const std::string& path);

}  // namespace cfmimo
