// Copyright 2026 The tnx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnx/unitensor.hpp"

namespace tnx::apps {

/// Where a two-site gate sits in the chain. Edge gates carry the full field of
/// their outer site; bulk gates carry half of each site's field.
enum class GatePosition { Bulk, LeftEdge, RightEdge, Isolated };

/// exp(-i dt h) for h = J Z Z + fields, as a rank-4 tensor with labels
/// (in_up, in_bottom, out_up, out_bottom) and rowrank 2.
UniTensor build_trotter_gate(double J, double hx, double hz, double dt, GatePosition pos);

struct CircuitConfig {
  int64_t N = 11;
  double J = 1.0, hx = 1.0, hz = 3.0;
  double dt = 0.1;
  int64_t steps = 40;
  /// One character per qubit: u/U/0 for up, d/D/1 for down.
  std::string pattern = "uuddddddduu";
};

struct CircuitResult {
  std::vector<double> times;
  std::vector<double> sz;     ///< <sigma_z> of qubit ceil(N/2)-1 (0-based)
  std::vector<double> norms;  ///< state norm after each step
};

/// Statevector evolution with first-order brickwork Trotter steps: gates on
/// bonds (0,1), (2,3), ... then (1,2), (3,4), .... Qubit 0 is the most
/// significant bit of the state index. Records t = 0 and every step.
CircuitResult simulate_circuit(const CircuitConfig& cfg);

/// Spin pattern parsed to 0 (up) / 1 (down) per qubit.
std::vector<int> parse_pattern(const std::string& pattern);

}  // namespace tnx::apps
