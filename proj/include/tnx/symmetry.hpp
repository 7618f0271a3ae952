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
#include <ostream>
#include <string>
#include <vector>

namespace tnx {

/// Abelian symmetry group acting on integer quantum numbers.
class Symmetry {
 public:
  enum class Kind : uint8_t { U1 = 0, Zn = 1 };

  static Symmetry U1() { return Symmetry(Kind::U1, 0); }
  /// Cyclic group Z_n, n >= 2.
  static Symmetry Zn(int64_t n);

  Kind kind() const { return kind_; }
  int64_t n() const { return n_; }

  /// Maps q into the canonical range ([0,n) for Zn, unchanged for U1).
  int64_t normalize(int64_t q) const;
  int64_t combine(int64_t q1, int64_t q2) const;
  int64_t reverse(int64_t q) const;
  int64_t identity() const { return 0; }

  /// "U1", "Z2", "Z3", ...
  std::string name() const;
  static Symmetry from_name(const std::string& s);

  bool operator==(const Symmetry& o) const { return kind_ == o.kind_ && n_ == o.n_; }
  bool operator!=(const Symmetry& o) const { return !(*this == o); }

 private:
  Symmetry(Kind k, int64_t n) : kind_(k), n_(n) {}
  Kind kind_;
  int64_t n_;
};

std::ostream& operator<<(std::ostream& os, const Symmetry& s);

/// One integer per symmetry of a symmetry list.
using Qn = std::vector<int64_t>;

// Componentwise helpers over a symmetry list.
Qn qn_normalize(const std::vector<Symmetry>& syms, const Qn& q);
Qn qn_combine(const std::vector<Symmetry>& syms, const Qn& a, const Qn& b);
Qn qn_reverse(const std::vector<Symmetry>& syms, const Qn& q);
Qn qn_identity(const std::vector<Symmetry>& syms);

}  // namespace tnx
