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

#include "tnx/bond.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace tnx {

std::string to_string(BondType t) {
  switch (t) {
    case BondType::REGULAR: return "REGULAR";
    case BondType::IN: return "|IN (KET)>";
    case BondType::OUT: return "< OUT (BRA)|";
  }
  return "?";
}

Bond::Bond(int64_t dim, BondType type) : type_(type), dim_(dim) {
  if (dim < 1) throw std::invalid_argument("bond dimension must be positive, got " + std::to_string(dim));
}

Bond::Bond(BondType type, std::vector<Sector> sectors, std::vector<Symmetry> syms)
    : type_(type), dim_(0), syms_(std::move(syms)) {
  if (type == BondType::REGULAR)
    throw std::invalid_argument("a REGULAR bond cannot carry quantum numbers");
  if (sectors.empty()) throw std::invalid_argument("symmetric bond needs at least one sector");
  if (syms_.empty()) throw std::invalid_argument("symmetric bond needs at least one symmetry");
  for (auto& s : sectors) {
    if (s.deg < 1) throw std::invalid_argument("sector degeneracy must be positive");
    Qn q = qn_normalize(syms_, s.qn);
    for (const auto& prev : sectors_)
      if (prev.qn == q) throw std::invalid_argument("duplicate quantum number in bond sectors");
    sectors_.push_back({std::move(q), s.deg});
    dim_ += s.deg;
  }
}

std::vector<int64_t> Bond::sector_offsets() const {
  std::vector<int64_t> off(sectors_.size() + 1, 0);
  for (size_t i = 0; i < sectors_.size(); ++i) off[i + 1] = off[i] + sectors_[i].deg;
  return off;
}

std::pair<size_t, int64_t> Bond::locate(int64_t index) const {
  if (index < 0 || index >= dim_) throw std::out_of_range("bond index out of range");
  if (sectors_.empty()) return {0, index};
  for (size_t s = 0; s < sectors_.size(); ++s) {
    if (index < sectors_[s].deg) return {s, index};
    index -= sectors_[s].deg;
  }
  throw std::logic_error("unreachable");
}

int64_t Bond::find_sector(const Qn& q) const {
  Qn nq = qn_normalize(syms_, q);
  for (size_t s = 0; s < sectors_.size(); ++s)
    if (sectors_[s].qn == nq) return static_cast<int64_t>(s);
  return -1;
}

Bond Bond::combine(const Bond& other) const {
  if (type_ != other.type_)
    throw std::invalid_argument("cannot combine bonds with different directions (" +
                                tnx::to_string(type_) + " vs " + tnx::to_string(other.type_) + ")");
  if (syms_ != other.syms_) throw std::invalid_argument("cannot combine bonds with different symmetries");
  if (!is_symmetric()) return Bond(dim_ * other.dim_, type_);
  std::vector<Sector> grouped;
  for (const auto& a : sectors_) {
    for (const auto& b : other.sectors_) {
      Qn q = qn_combine(syms_, a.qn, b.qn);
      bool merged = false;
      for (auto& g : grouped) {
        if (g.qn == q) {
          g.deg += a.deg * b.deg;
          merged = true;
          break;
        }
      }
      if (!merged) grouped.push_back({std::move(q), a.deg * b.deg});
    }
  }
  return Bond(type_, std::move(grouped), syms_);
}

Bond& Bond::combine_(const Bond& other) {
  *this = combine(other);
  return *this;
}

Bond Bond::redirect() const {
  Bond b = *this;
  b.redirect_();
  return b;
}

Bond& Bond::redirect_() {
  if (type_ == BondType::IN) type_ = BondType::OUT;
  else if (type_ == BondType::OUT) type_ = BondType::IN;
  return *this;
}

Bond combine_bonds(const std::vector<Bond>& bonds) {
  if (bonds.empty()) throw std::invalid_argument("combine_bonds needs at least one bond");
  Bond out = bonds[0];
  for (size_t i = 1; i < bonds.size(); ++i) out.combine_(bonds[i]);
  return out;
}

std::string Bond::to_string() const {
  std::ostringstream os;
  os << "Dim = " << dim_ << " |type: " << tnx::to_string(type_) << "\n";
  char buf[32];
  for (size_t k = 0; k < syms_.size(); ++k) {
    std::string name = syms_[k].name();
    os << " " << name << "::";
    for (const auto& s : sectors_) {
      std::snprintf(buf, sizeof buf, " %+4lld", static_cast<long long>(s.qn[k]));
      os << buf;
    }
    os << "\n";
  }
  if (is_symmetric()) {
    os << "Deg>>";
    for (const auto& s : sectors_) {
      std::snprintf(buf, sizeof buf, " %4lld", static_cast<long long>(s.deg));
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Bond& b) { return os << b.to_string(); }

}  // namespace tnx
