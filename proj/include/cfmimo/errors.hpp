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

#include <stdexcept>
#include <string>

namespace cfmimo {

/// Invalid or inconsistent configuration (dimensions, ranges).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A UE has an all-zero association column; its SINR is 0/0.
class DegenerateAssociation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No QoS-feasible starting point could be found for a problem instance.
class InfeasibleInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfmimo
