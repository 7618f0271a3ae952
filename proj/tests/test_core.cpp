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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tnx/bond.hpp"
#include "tnx/symmetry.hpp"
#include "tnx/tensor.hpp"

using namespace tnx;

namespace {
const std::vector<Symmetry> kU1{Symmetry::U1()};
using Idx = std::vector<int64_t>;
}

// ---- symmetry ----

TEST(Symmetry, U1CombineAndReverse) {
  Symmetry u = Symmetry::U1();
  EXPECT_EQ(u.combine(2, 3), 5);
  EXPECT_EQ(u.combine(-7, 0), -7);
  EXPECT_EQ(u.reverse(2), -2);
  EXPECT_EQ(u.reverse(0), 0);
  EXPECT_EQ(u.name(), "U1");
}

TEST(Symmetry, ZnCombineAndReverse) {
  Symmetry z = Symmetry::Zn(3);
  EXPECT_EQ(z.combine(2, 2), 1);
  EXPECT_EQ(z.reverse(1), 2);
  EXPECT_EQ(z.reverse(0), 0);
  EXPECT_EQ(z.normalize(-1), 2);
  EXPECT_EQ(z.name(), "Z3");
  EXPECT_THROW(Symmetry::Zn(1), std::invalid_argument);
}

TEST(Symmetry, Equality) {
  EXPECT_EQ(Symmetry::Zn(2), Symmetry::Zn(2));
  EXPECT_NE(Symmetry::Zn(2), Symmetry::Zn(3));
  EXPECT_NE(Symmetry::Zn(2), Symmetry::U1());
  EXPECT_EQ(Symmetry::from_name("Z4"), Symmetry::Zn(4));
  EXPECT_EQ(Symmetry::from_name("U1"), Symmetry::U1());
}

TEST(Symmetry, GroupLawsOnFullTables) {
  for (int64_t n = 2; n <= 6; ++n) {
    Symmetry z = Symmetry::Zn(n);
    for (int64_t a = 0; a < n; ++a) {
      EXPECT_EQ(z.combine(a, z.reverse(a)), 0);
      for (int64_t b = 0; b < n; ++b) {
        EXPECT_EQ(z.combine(a, b), z.combine(b, a));
        for (int64_t c = 0; c < n; ++c) EXPECT_EQ(z.combine(z.combine(a, b), c), z.combine(a, z.combine(b, c)));
      }
    }
  }
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int64_t> d(-1000, 1000);
  Symmetry u = Symmetry::U1();
  for (int i = 0; i < 200; ++i) {
    int64_t a = d(rng), b = d(rng), c = d(rng);
    EXPECT_EQ(u.combine(a, u.reverse(a)), 0);
    EXPECT_EQ(u.combine(u.combine(a, b), c), u.combine(a, u.combine(b, c)));
  }
}

TEST(Symmetry, MultiComponentQn) {
  std::vector<Symmetry> syms{Symmetry::U1(), Symmetry::Zn(2)};
  EXPECT_EQ(qn_combine(syms, {2, 1}, {3, 1}), (Qn{5, 0}));
  EXPECT_EQ(qn_reverse(syms, {2, 1}), (Qn{-2, 1}));
  EXPECT_EQ(qn_identity(syms), (Qn{0, 0}));
}

// ---- bond ----

TEST(Bond, PlainBonds) {
  Bond a(10);
  EXPECT_EQ(a.dim(), 10);
  EXPECT_EQ(a.type(), BondType::REGULAR);
  EXPECT_EQ(a.to_string().substr(0, 25), "Dim = 10 |type: REGULAR\n");
  Bond b(20, BondType::IN);
  EXPECT_EQ(b.type(), BondType::IN);
  EXPECT_EQ(Bond(1, BondType::OUT).dim(), 1);
  EXPECT_THROW(Bond(0), std::invalid_argument);
}

TEST(Bond, SymmetricConstruction) {
  Bond b(BondType::IN, {{{2}, 3}, {{4}, 5}}, kU1);
  EXPECT_EQ(b.dim(), 8);
  EXPECT_EQ(b.num_sectors(), 2u);
  EXPECT_EQ(b.qn(1), (Qn{4}));
  Bond m(BondType::IN, {{{2, 0}, 3}, {{4, 1}, 5}}, {Symmetry::U1(), Symmetry::Zn(2)});
  std::string s = m.to_string();
  EXPECT_NE(s.find("U1::   +2   +4"), std::string::npos) << s;
  EXPECT_NE(s.find("Z2::   +0   +1"), std::string::npos) << s;
  EXPECT_NE(s.find("Deg>>    3    5"), std::string::npos) << s;
  EXPECT_EQ(Bond(BondType::OUT, {{{0}, 1}}, kU1).dim(), 1);
  EXPECT_THROW(Bond(BondType::REGULAR, {{{0}, 1}}, kU1), std::invalid_argument);
  EXPECT_THROW(Bond(BondType::IN, {{{0, 1}, 1}}, kU1), std::invalid_argument);
  EXPECT_THROW(Bond(BondType::IN, {{{0}, 1}, {{0}, 2}}, kU1), std::invalid_argument);
}

TEST(Bond, Locate) {
  Bond b(BondType::IN, {{{2}, 3}, {{4}, 5}}, kU1);
  EXPECT_EQ(b.locate(0), (std::pair<size_t, int64_t>{0, 0}));
  EXPECT_EQ(b.locate(4), (std::pair<size_t, int64_t>{1, 1}));
  EXPECT_EQ(b.find_sector({4}), 1);
  EXPECT_EQ(b.find_sector({7}), -1);
}

TEST(Bond, CombinePlain) {
  EXPECT_EQ(Bond(10).combine(Bond(2)).dim(), 20);
  EXPECT_EQ(combine_bonds({Bond(2), Bond(3), Bond(4)}).dim(), 24);
}

TEST(Bond, CombineGroupsSectors) {
  Bond b1(BondType::IN, {{{0}, 1}, {{1}, 1}}, kU1), b2(BondType::IN, {{{2}, 1}, {{3}, 1}}, kU1);
  Bond c = b1.combine(b2);
  EXPECT_EQ(c.sectors(), (std::vector<Sector>{{{2}, 1}, {{3}, 2}, {{4}, 1}}));
  EXPECT_EQ(c.type(), BondType::IN);
  Bond trivial(BondType::IN, {{{0}, 1}}, kU1);
  EXPECT_EQ(b1.combine(trivial), b1);
  EXPECT_THROW(b1.combine(b2.redirect()), std::invalid_argument);
  EXPECT_THROW(b1.combine(Bond(BondType::IN, {{{0}, 1}}, {Symmetry::Zn(2)})), std::invalid_argument);
  EXPECT_THROW(b1.combine(Bond(2)), std::invalid_argument);
}

TEST(Bond, CombineAssociativeUpToGrouping) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    Bond a = oracle::random_u1_bond(rng, BondType::OUT), b = oracle::random_u1_bond(rng, BondType::OUT),
         c = oracle::random_u1_bond(rng, BondType::OUT);
    auto total = [](const Bond& x) {
      std::map<int64_t, int64_t> m;
      for (const auto& s : x.sectors()) m[s.qn[0]] += s.deg;
      return m;
    };
    Bond l = a.combine(b).combine(c), r = a.combine(b.combine(c));
    EXPECT_EQ(total(l), total(r));
    EXPECT_EQ(l.dim(), a.dim() * b.dim() * c.dim());
  }
}

TEST(Bond, Redirect) {
  Bond b(BondType::IN, {{{2, 0}, 3}, {{4, 1}, 5}}, {Symmetry::U1(), Symmetry::Zn(2)});
  Bond r = b.redirect();
  EXPECT_EQ(r.type(), BondType::OUT);
  EXPECT_EQ(r.dim(), 8);
  EXPECT_EQ(r.sectors(), b.sectors());
  EXPECT_EQ(r.redirect(), b);
  EXPECT_NE(r.to_string().find("< OUT (BRA)|"), std::string::npos);
  EXPECT_EQ(Bond(3).redirect(), Bond(3));
  Bond in_place = b;
  in_place.redirect_();
  EXPECT_EQ(in_place, r);
}

// ---- storage / dense tensor ----

TEST(DenseTensor, Generators) {
  auto a = DenseTensor::arange(10);
  EXPECT_EQ(a.shape(), (Shape{10}));
  EXPECT_EQ(a.to_vector<double>(), (std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  auto z = DenseTensor::zeros({3, 4, 5});
  EXPECT_EQ(z.size(), 60);
  EXPECT_EQ(z.Norm(), 0.0);
  EXPECT_EQ(DenseTensor::normal({3, 4, 5}, 0, 1, 7).to_vector<double>(),
            DenseTensor::normal({3, 4, 5}, 0, 1, 7).to_vector<double>());
  EXPECT_NE(DenseTensor::normal({3, 4, 5}, 0, 1, 7).to_vector<double>(),
            DenseTensor::normal({3, 4, 5}, 0, 1, 8).to_vector<double>());
  auto e = DenseTensor::eye(3);
  EXPECT_EQ(e.get({1, 1}).real(), 1.0);
  EXPECT_EQ(e.get({0, 1}).real(), 0.0);
  EXPECT_THROW(DenseTensor::zeros({2, 0}), std::invalid_argument);
  EXPECT_THROW(DenseTensor::uniform({2}, 1.0, 0.0), std::invalid_argument);
  EXPECT_EQ(DenseTensor::arange(3, DType::Int64).dtype(), DType::Int64);
}

TEST(DenseTensor, Reshape) {
  auto t = DenseTensor::arange(24).reshape({2, 3, 4});
  EXPECT_EQ(t.shape(), (Shape{2, 3, 4}));
  EXPECT_EQ(t.reshape({24}).to_vector<double>(), DenseTensor::arange(24).to_vector<double>());
  EXPECT_THROW(t.reshape({5, 5}), std::invalid_argument);
  auto p = t.permute({2, 0, 1});
  auto r = p.reshape({24});
  EXPECT_EQ(r.to_vector<double>(), p.contiguous().to_vector<double>());
}

TEST(DenseTensor, PermuteIsLazy) {
  auto t = DenseTensor::arange(24).reshape({2, 3, 4});
  auto p = t.permute({1, 2, 0});
  EXPECT_EQ(p.shape(), (Shape{3, 4, 2}));
  EXPECT_FALSE(p.is_contiguous());
  EXPECT_TRUE(t.permute({0, 1, 2}).is_contiguous());
  EXPECT_THROW(t.permute({0, 0, 1}), std::invalid_argument);
  auto q = DenseTensor::arange(8).reshape({2, 2, 2}).permute({0, 2, 1});
  EXPECT_EQ(q.storage()->vec<double>(), (std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7}));
  auto c = q.contiguous();
  EXPECT_EQ(c.storage()->vec<double>(), (std::vector<double>{0, 2, 1, 3, 4, 6, 5, 7}));
  EXPECT_EQ(c.contiguous().storage()->vec<double>(), c.storage()->vec<double>());
}

TEST(DenseTensor, ElementsAndSlices) {
  auto t = DenseTensor::zeros({2, 3, 4});
  t.set({1, 1, 2}, 3.0);
  EXPECT_EQ(t.get({1, 1, 2}).real(), 3.0);
  EXPECT_THROW(t.get({2, 0, 0}), std::out_of_range);
  auto all = t.get({Slice::all(), Slice::all(), Slice::all()});
  EXPECT_EQ(oracle::values(all), oracle::values(t));
  t.set({Slice::index(0), Slice::all(), Slice::range(1, 3)}, DenseTensor::ones({3, 2}));
  EXPECT_EQ(t.get({0, 1, 2}).real(), 1.0);
  EXPECT_EQ(t.get({0, 1, 0}).real(), 0.0);
  auto copy = t.get({Slice::index(0), Slice::all(), Slice::all()});
  t.set({0, 0, 0}, 9.0);
  EXPECT_EQ(copy.get({0, 0}).real(), 0.0);
  EXPECT_THROW(t.set({Slice::index(0), Slice::all(), Slice::range(1, 3)}, DenseTensor::ones({2, 2})),
               std::invalid_argument);
}

TEST(DenseTensor, Arithmetic) {
  auto x = DenseTensor::ones({3, 4}) * 3.0 + 2.0;
  for (double v : x.to_vector<double>()) EXPECT_EQ(v, 5.0);
  auto y = DenseTensor::ones({3, 4}) / x;
  for (double v : y.to_vector<double>()) EXPECT_DOUBLE_EQ(v, 0.2);
  EXPECT_EQ((x - x).Norm(), 0.0);
  EXPECT_THROW(x + DenseTensor::ones({4, 3}), std::invalid_argument);
  auto c = DenseTensor::ones({2}, DType::Complex128);
  EXPECT_EQ((x.reshape({12}).get({Slice::range(0, 2)}) + c).dtype(), DType::Complex128);
  EXPECT_EQ((c + x.reshape({12}).get({Slice::range(0, 2)})).dtype(), DType::Complex128);
  auto i = DenseTensor::arange(4, DType::Int64);
  EXPECT_EQ((i / i.astype(DType::Int64)).dtype(), DType::Float64);
  auto sq = DenseTensor::arange(4).Pow(2.0);
  EXPECT_EQ(sq.to_vector<double>(), (std::vector<double>{0, 1, 4, 9}));
}

TEST(DenseTensor, NormMatchesNaiveSum) {
  auto t = DenseTensor::normal({4, 5, 6}, 0, 1, 11, DType::Complex128);
  double s = 0;
  for (auto v : oracle::values(t)) s += std::norm(v);
  EXPECT_NEAR(t.Norm() * t.Norm(), s, 1e-12 * s);
  EXPECT_NEAR(t.permute({2, 0, 1}).Norm(), t.Norm(), 1e-12 * t.Norm());
}

TEST(DenseTensor, ConjAndKron) {
  auto c = DenseTensor::zeros({1}, DType::Complex128);
  c.set(Idx{0}, cplx(1, 2));
  EXPECT_EQ(c.Conj().get(Idx{0}).to_complex(), cplx(1, -2));
  auto z = DenseTensor::zeros({2, 2});
  z.set({0, 0}, 1.0);
  z.set({1, 1}, -1.0);
  auto k = Kron(z, z);
  EXPECT_EQ(k.shape(), (Shape{4, 4}));
  std::vector<double> diag;
  for (int64_t i = 0; i < 4; ++i) diag.push_back(k.get({i, i}).real());
  EXPECT_EQ(diag, (std::vector<double>{1, -1, -1, 1}));
  auto a = DenseTensor::normal({2, 3}, 0, 1, 1), b = DenseTensor::normal({4, 5}, 0, 1, 2);
  auto ab = Kron(a, b);
  EXPECT_EQ(ab.shape(), (Shape{8, 15}));
  EXPECT_DOUBLE_EQ(ab.get({1 * 4 + 3, 2 * 5 + 4}).real(), a.get({1, 2}).real() * b.get({3, 4}).real());
}

TEST(DenseTensor, HandlesAlias) {
  auto a = DenseTensor::zeros({2});
  auto b = a;
  b.set(Idx{0}, 4.0);
  EXPECT_EQ(a.get(Idx{0}).real(), 4.0);
  auto c = a.clone();
  c.set(Idx{0}, 1.0);
  EXPECT_EQ(a.get(Idx{0}).real(), 4.0);
}

TEST(DType, Strings) {
  EXPECT_EQ(to_string(DType::Float64), "Double (Float64)");
  EXPECT_EQ(promote(DType::Float64, DType::Complex128), DType::Complex128);
  EXPECT_EQ(promote(DType::Int64, DType::Bool), DType::Int64);
  EXPECT_EQ(promote_div(DType::Int64, DType::Int64), DType::Float64);
}
