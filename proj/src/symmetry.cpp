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

#include "tnx/symmetry.hpp"

#include <stdexcept>

namespace tnx {

Symmetry Symmetry::Zn(int64_t n) {
  if (n < 2) throw std::invalid_argument("Zn symmetry requires n >= 2, got " + std::to_string(n));
  return Symmetry(Kind::Zn, n);
}

int64_t Symmetry::normalize(int64_t q) const {
  if (kind_ == Kind::U1) return q;
  int64_t r = q % n_;
  return r < 0 ? r + n_ : r;
}

int64_t Symmetry::combine(int64_t q1, int64_t q2) const {
  if (kind_ == Kind::U1) return q1 + q2;
  return normalize(normalize(q1) + normalize(q2));
}

int64_t Symmetry::reverse(int64_t q) const {
  if (kind_ == Kind::U1) return -q;
  return normalize(n_ - normalize(q));
}

std::string Symmetry::name() const {
  if (kind_ == Kind::U1) return "U1";
  return "Z" + std::to_string(n_);
}

Symmetry Symmetry::from_name(const std::string& s) {
  if (s == "U1") return U1();
  if (s.size() >= 2 && s[0] == 'Z') {
    size_t used = 0;
    int64_t n = std::stoll(s.substr(1), &used);
    if (used == s.size() - 1) return Zn(n);
  }
  throw std::invalid_argument("unknown symmetry name '" + s + "'");
}

std::ostream& operator<<(std::ostream& os, const Symmetry& s) {
  os << "--------------------\n[Symmetry]\n";
  os << "type : Abelian, " << s.name() << "\n";
  if (s.kind() == Symmetry::Kind::U1) {
    os << "combine rule : Q1 + Q2\n";
    os << "reverse rule : Q*(-1)\n";
  } else {
    os << "combine rule : (Q1 + Q2)%" << s.n() << "\n";
    os << "reverse rule : Q*(-1)%" << s.n() << "\n";
  }
  os << "--------------------\n";
  return os;
}

static void check_arity(const std::vector<Symmetry>& syms, const Qn& q) {
  if (q.size() != syms.size())
    throw std::invalid_argument("quantum number has " + std::to_string(q.size()) +
                                " components but there are " + std::to_string(syms.size()) +
                                " symmetries");
}

Qn qn_normalize(const std::vector<Symmetry>& syms, const Qn& q) {
  check_arity(syms, q);
  Qn out(q.size());
  for (size_t i = 0; i < q.size(); ++i) out[i] = syms[i].normalize(q[i]);
  return out;
}

Qn qn_combine(const std::vector<Symmetry>& syms, const Qn& a, const Qn& b) {
  check_arity(syms, a);
  check_arity(syms, b);
  Qn out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = syms[i].combine(a[i], b[i]);
  return out;
}

Qn qn_reverse(const std::vector<Symmetry>& syms, const Qn& q) {
  check_arity(syms, q);
  Qn out(q.size());
  for (size_t i = 0; i < q.size(); ++i) out[i] = syms[i].reverse(q[i]);
  return out;
}

Qn qn_identity(const std::vector<Symmetry>& syms) { return Qn(syms.size(), 0); }

}  // namespace tnx
