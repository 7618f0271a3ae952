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

#include "tnx/physics.hpp"

#include <stdexcept>

namespace tnx::physics {

DenseTensor pauli(const std::string& which) {
  const cplx i(0, 1);
  std::vector<cplx> v;
  if (which == "x" || which == "X")
    v = {0, 1, 1, 0};
  else if (which == "y" || which == "Y")
    v = {0, -i, i, 0};
  else if (which == "z" || which == "Z")
    v = {1, 0, 0, -1};
  else if (which == "i" || which == "I")
    v = {1, 0, 0, 1};
  else
    throw std::invalid_argument("unknown Pauli matrix '" + which + "'");
  return DenseTensor::from_vector(v, {2, 2});
}

DenseTensor spin(const std::string& which) {
  if (which == "+") return DenseTensor::from_vector(std::vector<cplx>{0, 1, 0, 0}, {2, 2});
  if (which == "-") return DenseTensor::from_vector(std::vector<cplx>{0, 0, 1, 0}, {2, 2});
  if (which == "i" || which == "I") throw std::invalid_argument("spin operators are x, y, z, + and -");
  return pauli(which) * 0.5;
}

}  // namespace tnx::physics
