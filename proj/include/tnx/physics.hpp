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

#include <string>

#include "tnx/tensor.hpp"

namespace tnx::physics {

// Basis convention: index 0 is spin up, index 1 is spin down.

/// Pauli matrix "x", "y", "z" or the identity "i" as a 2x2 Complex128 tensor.
DenseTensor pauli(const std::string& which);
/// Spin-1/2 operator "x", "y", "z" (sigma / 2), "+" or "-" (Sx +- i Sy).
DenseTensor spin(const std::string& which);

}  // namespace tnx::physics
