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

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "tnx/contract.hpp"
#include "tnx/linalg.hpp"

using namespace tnx;
using Eigen::MatrixXcd;

namespace {

MatrixXcd to_eigen(const UniTensor& m) {
  DenseTensor d = m.get_block().contiguous();
  auto v = oracle::values(d);
  MatrixXcd e(d.shape()[0], d.shape()[1]);
  for (int64_t i = 0; i < e.rows(); ++i)
    for (int64_t j = 0; j < e.cols(); ++j) e(i, j) = v[static_cast<size_t>(i * e.cols() + j)];
  return e;
}

UniTensor matrix(int64_t r, int64_t c, uint64_t seed, DType dt = DType::Float64) {
  return UniTensor(DenseTensor::normal({r, c}, 0, 1, seed, dt), 1, {"r", "c"});
}

std::vector<double> diag(const UniTensor& S) {
  std::vector<double> out;
  for (const auto& b : linalg::singular_values(S))
    for (double x : b.to_vector<double>()) out.push_back(x);
  return out;
}

const std::vector<Symmetry> kU1{Symmetry::U1()};

}  // namespace

TEST(Svd, ValuesMatchEigenAndReconstruct) {
  for (auto dt : {DType::Float64, DType::Complex128}) {
    for (auto [r, c] : std::vector<std::pair<int64_t, int64_t>>{{5, 3}, {3, 5}, {6, 6}, {1, 4}}) {
      UniTensor M = matrix(r, c, 40 + r * 7 + c, dt);
      auto res = linalg::Svd(M);
      Eigen::JacobiSVD<MatrixXcd> js(to_eigen(M));
      auto s = diag(res.S);
      ASSERT_EQ(static_cast<int64_t>(s.size()), std::min(r, c));
      for (size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], js.singularValues()(static_cast<int64_t>(i)), 1e-12);
      EXPECT_TRUE(std::is_sorted(s.rbegin(), s.rend()));
      UniTensor R = Contract(Contract(res.U, res.S), res.Vdag);
      EXPECT_LE((R - M).Norm(), 1e-12 * M.Norm());
      EXPECT_EQ(res.U.labels(), (std::vector<std::string>{"r", "_aux_L"}));
      EXPECT_EQ(res.Vdag.labels(), (std::vector<std::string>{"_aux_R", "c"}));
    }
  }
}

TEST(Svd, ValuesOnly) {
  auto res = linalg::Svd(matrix(4, 3, 1), false);
  EXPECT_FALSE(res.U.defined());
  EXPECT_FALSE(res.Vdag.defined());
  EXPECT_EQ(diag(res.S).size(), 3u);
}

TEST(Svd, AuxLabelsAvoidClashes) {
  UniTensor M(DenseTensor::normal({3, 3}, 0, 1, 2), 1, {"_aux_L", "c"});
  auto res = linalg::Svd(M);
  EXPECT_NE(res.U.labels()[1], "_aux_L");
  EXPECT_EQ(Contract(Contract(res.U, res.S), res.Vdag).permute(M.labels()).rank(), 2);
}

TEST(SvdTruncate, KeepsLargestAcrossBlocks) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Bond a = oracle::random_u1_bond(rng, BondType::IN), b = oracle::random_u1_bond(rng, BondType::IN);
    Bond c = a.combine(b).redirect();
    UniTensor M({a, b, c}, {"a", "b", "c"}, 2);
    if (M.Nblocks() == 0) continue;
    oracle::randomize(M, rng);
    auto full = diag(linalg::Svd(M, false).S);
    std::vector<double> sorted = full;
    std::sort(sorted.rbegin(), sorted.rend());
    int64_t keep = 1 + trial % 4;
    auto tr = linalg::Svd_truncate(M, keep, 0.0, 2);
    auto kept = diag(tr.S);
    std::sort(kept.rbegin(), kept.rend());
    size_t want = std::min<size_t>(static_cast<size_t>(keep), sorted.size());
    ASSERT_EQ(kept.size(), want);
    for (size_t i = 0; i < want; ++i) EXPECT_NEAR(kept[i], sorted[i], 1e-12);
    auto errs = tr.s_err.get_block().to_vector<double>();
    if (want == sorted.size()) {
      EXPECT_EQ(errs, std::vector<double>{0.0});
    } else {
      ASSERT_EQ(errs.size(), sorted.size() - want);
      for (size_t i = 0; i < errs.size(); ++i) EXPECT_NEAR(errs[i], sorted[want + i], 1e-12);
    }
  }
}

TEST(SvdTruncate, ErrThresholdAndMinimumOne) {
  UniTensor M(DenseTensor::zeros({3, 3}), 1, {"r", "c"});
  M.set_elem({0, 0}, 5.0);
  M.set_elem({1, 1}, 1e-3);
  M.set_elem({2, 2}, 1e-9);
  EXPECT_EQ(diag(linalg::Svd_truncate(M, 3, 1e-6).S), (std::vector<double>{5.0, 1e-3}));
  EXPECT_EQ(diag(linalg::Svd_truncate(M, 3, 10.0).S), (std::vector<double>{5.0}));
  auto one = linalg::Svd_truncate(M, 1, 0.0, 1);
  EXPECT_EQ(one.s_err.get_block().to_vector<double>(), (std::vector<double>{1e-3}));
  EXPECT_FALSE(linalg::Svd_truncate(M, 1).s_err.defined());
}

TEST(Eigh, PauliX) {
  UniTensor X(DenseTensor::from_vector<double>({0, 1, 1, 0}, {2, 2}), 1, {"a", "b"});
  auto e = linalg::Eigh(X);
  auto v = diag(e.eigvals);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], -1.0, 1e-15);
  EXPECT_NEAR(v[1], 1.0, 1e-15);
}

TEST(Eigh, MatchesEigenAndRejectsNonHermitian) {
  for (int64_t n : {3, 7, 16}) {
    UniTensor A = matrix(n, n, 100 + n, DType::Complex128);
    UniTensor H = A + A.Dagger().relabel({"r", "c"});
    auto e = linalg::Eigh(H);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(to_eigen(H));
    auto v = diag(e.eigvals);
    for (int64_t i = 0; i < n; ++i) EXPECT_NEAR(v[static_cast<size_t>(i)], es.eigenvalues()(i), 1e-11);
    EXPECT_THROW(linalg::Eigh(A), std::invalid_argument);
  }
}

TEST(Eig, GeneralMatrix) {
  UniTensor M(DenseTensor::from_vector<double>({0, -1, 1, 0}, {2, 2}), 1, {"a", "b"});
  auto e = linalg::Eig(M);
  auto ev = oracle::values(linalg::singular_values(e.eigvals)[0]);
  std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return x.imag() < y.imag(); });
  EXPECT_NEAR(std::abs(ev[0] - cplx(0, -1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(ev[1] - cplx(0, 1)), 0.0, 1e-12);
  UniTensor MV = Contract(M.relabel({"a", "x"}), e.V.relabel({"x", "k"}));
  UniTensor VL = Contract(e.V.relabel({"a", "x"}), e.eigvals.relabel({"x", "k"}));
  EXPECT_LE((MV - VL).Norm(), 1e-12);
}

TEST(Qr, OrthonormalAndTriangular) {
  for (auto [r, c] : std::vector<std::pair<int64_t, int64_t>>{{6, 3}, {3, 6}, {4, 4}}) {
    UniTensor M = matrix(r, c, 7 * r + c, DType::Complex128);
    auto qr = linalg::Qr(M);
    EXPECT_LE((Contract(qr.Q, qr.R) - M).Norm(), 1e-12 * M.Norm());
    MatrixXcd Q = to_eigen(qr.Q), R = to_eigen(qr.R);
    EXPECT_LE((Q.adjoint() * Q - MatrixXcd::Identity(Q.cols(), Q.cols())).norm(), 1e-13);
    for (int64_t i = 0; i < R.rows(); ++i)
      for (int64_t j = 0; j < std::min(i, R.cols()); ++j) EXPECT_EQ(R(i, j), cplx(0, 0));
  }
}

TEST(ExpM, NilpotentAndShift) {
  UniTensor N(DenseTensor::from_vector<double>({0, 1, 0, 0}, {2, 2}), 1, {"a", "b"});
  EXPECT_EQ(linalg::ExpM(N).get_block().to_vector<double>(), (std::vector<double>{1, 1, 0, 1}));
  auto e = linalg::ExpM(N, 2.0, std::log(3.0)).get_block().to_vector<double>();
  EXPECT_NEAR(e[0], 3.0, 1e-13);
  EXPECT_NEAR(e[1], 6.0, 1e-13);
}

TEST(ExpM, HermitianMatchesSpectralOracle) {
  UniTensor A = matrix(5, 5, 11, DType::Complex128);
  UniTensor H = A + A.Dagger().relabel({"r", "c"});
  UniTensor U = linalg::ExpM(H, cplx(0, -0.3));
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(to_eigen(H));
  Eigen::VectorXcd ph = (es.eigenvalues().cast<cplx>() * cplx(0, -0.3)).array().exp();
  MatrixXcd want = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  EXPECT_LE((to_eigen(U) - want).norm(), 1e-12);
  EXPECT_LE((to_eigen(U).adjoint() * to_eigen(U) - MatrixXcd::Identity(5, 5)).norm(), 1e-12);
}

TEST(Decompositions, SymmetricBlockwise) {
  Bond in(BondType::IN, {{{0}, 2}, {{1}, 3}}, kU1);
  UniTensor M({in, in.redirect()}, {"a", "b"}, 1);
  std::mt19937_64 rng(21);
  oracle::randomize(M, rng);
  auto svd = linalg::Svd(M);
  EXPECT_LE((Contract(Contract(svd.U, svd.S), svd.Vdag) - M).Norm(), 1e-12 * M.Norm());
  EXPECT_EQ(svd.U.bond(1).type(), BondType::OUT);
  EXPECT_EQ(svd.Vdag.bond(0).type(), BondType::IN);
  auto qr = linalg::Qr(M);
  EXPECT_LE((Contract(qr.Q, qr.R) - M).Norm(), 1e-12 * M.Norm());
  auto dense = diag(linalg::Svd(M.to_dense()).S);
  auto sym = diag(svd.S);
  std::sort(sym.rbegin(), sym.rend());
  ASSERT_EQ(sym.size(), dense.size());
  for (size_t i = 0; i < sym.size(); ++i) EXPECT_NEAR(sym[i], dense[i], 1e-12);
}

TEST(Lanczos, IdentityConvergesImmediately) {
  linalg::FunctionLinOp id(10, [](const UniTensor& v) { return v.clone(); });
  auto r = linalg::Lanczos(id, 1, 1e-12, -1, 3);
  ASSERT_EQ(r.eigenvalues.size(), 1u);
  EXPECT_NEAR(r.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(r.eigenvectors[0].Norm(), 1.0, 1e-12);
}

TEST(Lanczos, DiagonalOperator) {
  const int64_t n = 50;
  DenseTensor d = DenseTensor::arange(n);
  linalg::FunctionLinOp op(n, [&](const UniTensor& v) { return v * UniTensor(d); });
  auto r = linalg::Lanczos(op, 3, 1e-10, -1, 1);
  ASSERT_EQ(r.eigenvalues.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.eigenvalues[static_cast<size_t>(i)], i, 1e-8);
  EXPECT_GT(r.matvecs, 0);
}

TEST(Lanczos, ThrowsWithBestEstimateWhenBudgetTooSmall) {
  const int64_t n = 200;
  DenseTensor d = DenseTensor::uniform({n}, 0, 1, 5);
  linalg::FunctionLinOp op(n, [&](const UniTensor& v) { return v * UniTensor(d); });
  try {
    linalg::Lanczos(op, 1, 1e-14, 4, 1);
    FAIL() << "expected a convergence failure";
  } catch (const linalg::ConvergenceError& e) {
    EXPECT_FALSE(e.best().eigenvalues.empty());
  }
}
