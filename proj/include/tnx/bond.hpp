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
#include <utility>
#include <vector>

#include "tnx/symmetry.hpp"

namespace tnx {

enum class BondType : int8_t { REGULAR = 0, IN = 1, OUT = 2 };

std::string to_string(BondType t);

struct Sector {
  Qn qn;
  int64_t deg;
  bool operator==(const Sector& o) const { return qn == o.qn && deg == o.deg; }
};

/// One tensor index: dimension, direction and (optionally) quantum-number sectors.
/// Bonds are plain values; the in-place variants overwrite *this.
class Bond {
 public:
  Bond() = default;
  /// Non-symmetric bond. dim must be positive.
  explicit Bond(int64_t dim, BondType type = BondType::REGULAR);
  /// Symmetric bond. Sector order is kept and defines the sector (Qn) index.
  Bond(BondType type, std::vector<Sector> sectors, std::vector<Symmetry> syms);

  int64_t dim() const { return dim_; }
  BondType type() const { return type_; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  const std::vector<Symmetry>& syms() const { return syms_; }
  bool is_symmetric() const { return !sectors_.empty(); }
  size_t num_sectors() const { return sectors_.size(); }
  const Qn& qn(size_t sector) const { return sectors_.at(sector).qn; }
  int64_t deg(size_t sector) const { return sectors_.at(sector).deg; }

  /// Offset of the first index of each sector, plus dim at the end.
  std::vector<int64_t> sector_offsets() const;
  /// (sector index, offset inside the sector) of a global index.
  std::pair<size_t, int64_t> locate(int64_t index) const;
  /// Index of the sector with quantum number q, or -1.
  int64_t find_sector(const Qn& q) const;

  Bond combine(const Bond& other) const;
  Bond& combine_(const Bond& other);
  Bond redirect() const;
  Bond& redirect_();
  Bond clone() const { return *this; }

  bool operator==(const Bond& o) const {
    return type_ == o.type_ && dim_ == o.dim_ && sectors_ == o.sectors_ && syms_ == o.syms_;
  }
  bool operator!=(const Bond& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  BondType type_ = BondType::REGULAR;
  int64_t dim_ = 1;
  std::vector<Sector> sectors_;
  std::vector<Symmetry> syms_;
};

/// Left fold of Bond::combine over a non-empty list.
Bond combine_bonds(const std::vector<Bond>& bonds);

std::ostream& operator<<(std::ostream& os, const Bond& b);

}  // namespace tnx
