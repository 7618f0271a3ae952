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

// Reference implementations used only by the tests. They favour plain loops
// over speed and share no code with the library kernels.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tnx/bond.hpp"
#include "tnx/tensor.hpp"
#include "tnx/unitensor.hpp"

namespace oracle {

using tnx::cplx;
using Labels = std::vector<std::string>;

inline bool next_index(std::vector<int64_t>& idx, const tnx::Shape& shape) {
  for (size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < shape[k]) return true;
    idx[k] = 0;
  }
  return false;
}

/// All entries of t in row-major order of its logical shape, as complex numbers.
inline std::vector<cplx> values(const tnx::DenseTensor& t) {
  std::vector<cplx> out;
  tnx::Shape s = t.shape();
  std::vector<int64_t> idx(s.size(), 0);
  if (tnx::shape_size(s) == 0) return out;
  do out.push_back(t.get(idx).to_complex());
  while (next_index(idx, s));
  return out;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Sum over shared labels by explicit loops. Output: free labels of A, then of B.
inline std::vector<cplx> naive_contract(const tnx::DenseTensor& A, const Labels& la, const tnx::DenseTensor& B,
                                        const Labels& lb, Labels* out_labels = nullptr) {
  Labels shared, fa, fb;
  std::map<std::string, int64_t> dim;
  for (size_t i = 0; i < la.size(); ++i) dim[la[i]] = A.shape()[i];
  for (size_t i = 0; i < lb.size(); ++i) dim[lb[i]] = B.shape()[i];
  for (const auto& l : la) (std::find(lb.begin(), lb.end(), l) != lb.end() ? shared : fa).push_back(l);
  for (const auto& l : lb)
    if (std::find(la.begin(), la.end(), l) == la.end()) fb.push_back(l);
  Labels outl = fa;
  outl.insert(outl.end(), fb.begin(), fb.end());
  if (out_labels) *out_labels = outl;
  tnx::Shape os, ss;
  for (const auto& l : outl) os.push_back(dim[l]);
  for (const auto& l : shared) ss.push_back(dim[l]);
  std::vector<cplx> out;
  std::vector<int64_t> oi(os.size(), 0);
  if (tnx::shape_size(os) == 0) return out;
  do {
    std::map<std::string, int64_t> val;
    for (size_t k = 0; k < outl.size(); ++k) val[outl[k]] = oi[k];
    cplx acc = 0.0;
    std::vector<int64_t> si(ss.size(), 0);
    if (tnx::shape_size(ss) > 0) {
      do {
        for (size_t k = 0; k < shared.size(); ++k) val[shared[k]] = si[k];
        std::vector<int64_t> ia, ib;
        for (const auto& l : la) ia.push_back(val[l]);
        for (const auto& l : lb) ib.push_back(val[l]);
        acc += A.get(ia).to_complex() * B.get(ib).to_complex();
      } while (next_index(si, ss));
    }
    out.push_back(acc);
  } while (next_index(oi, os));
  return out;
}

/// Exhaustive minimum contraction cost over every binary tree. Cost of a pair
/// is the product of the dimensions of all labels open on either side.
inline double brute_force_cost(const std::vector<Labels>& labels, const std::map<std::string, int64_t>& dims) {
  const size_t n = labels.size();
  std::function<Labels(unsigned)> open = [&](unsigned set) {
    std::map<std::string, int> inside, total;
    for (size_t i = 0; i < n; ++i)
      for (const auto& l : labels[i]) {
        total[l]++;
        if (set >> i & 1u) inside[l]++;
      }
    Labels o;
    for (const auto& [l, c] : inside)
      if (c < total[l] || total[l] == 1) o.push_back(l);
    return o;
  };
  std::function<double(unsigned)> best = [&](unsigned set) -> double {
    if ((set & (set - 1)) == 0) return 0.0;
    double b = INFINITY;
    for (unsigned sub = (set - 1) & set; sub; sub = (sub - 1) & set) {
      unsigned rest = set & ~sub;
      if (sub < rest) continue;
      std::set<std::string> u;
      for (const auto& l : open(sub)) u.insert(l);
      for (const auto& l : open(rest)) u.insert(l);
      double c = 1.0;
      for (const auto& l : u) c *= static_cast<double>(dims.at(l));
      b = std::min(b, best(sub) + best(rest) + c);
    }
    return b;
  };
  return best((1u << n) - 1);
}

/// Random U(1) bond with 1 to 3 distinct sectors.
inline tnx::Bond random_u1_bond(std::mt19937_64& rng, tnx::BondType type) {
  std::uniform_int_distribution<int> nsec(1, 3), q(-2, 2), deg(1, 2);
  std::set<int64_t> used;
  std::vector<tnx::Sector> sec;
  int k = nsec(rng);
  while (static_cast<int>(sec.size()) < k) {
    int64_t v = q(rng);
    if (used.insert(v).second) sec.push_back({{v}, deg(rng)});
  }
  return tnx::Bond(type, sec, {tnx::Symmetry::U1()});
}

/// Fills every stored block with normal random numbers.
inline void randomize(tnx::UniTensor& t, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  for (int64_t k = 0; k < t.Nblocks(); ++k) {
    tnx::DenseTensor b = t.get_block(k);
    std::vector<int64_t> idx(static_cast<size_t>(b.rank()), 0);
    if (tnx::shape_size(b.shape()) == 0) continue;
    do b.set(idx, nd(rng));
    while (next_index(idx, b.shape()));
    t.put_block(b, k);
  }
}

inline double free_fermion_energy(int64_t N) {
  double e = 0.0;
  for (int64_t k = 1; k <= N; ++k) {
    double ek = std::cos(M_PI * static_cast<double>(k) / static_cast<double>(N + 1));
    if (ek < 0) e += ek;
  }
  return e;
}

/// Ground energy of the open XX chain sum (Sx Sx + Sy Sy) by full diagonalization.
inline double xx_exact_energy(int N) {
  const int dim = 1 << N;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s)
    for (int j = 0; j + 1 < N; ++j) {
      int a = s >> (N - 1 - j) & 1, b = s >> (N - 2 - j) & 1;
      if (a != b) H(s ^ (3 << (N - 2 - j)), s) += 0.5;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  return es.eigenvalues()(0);
}

using SpMat = Eigen::SparseMatrix<cplx>;

inline SpMat sparse_identity(int64_t n) {
  SpMat I(n, n);
  I.setIdentity();
  return I;
}

inline SpMat sparse_kron(const SpMat& a, const SpMat& b) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
          t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(), ia.value() * ib.value());
  SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

/// exp(-i dt h) of a Hermitian 4x4 matrix via its eigenbasis.
inline Eigen::Matrix4cd unitary_4x4(const Eigen::Matrix4cd& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd ph;
  for (int i = 0; i < 4; ++i) ph(i) = std::exp(cplx(0.0, -dt * es.eigenvalues()(i)));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// <sigma_z> of the central qubit after each brickwork step, using full
/// 2^N x 2^N gate matrices. Qubit 0 is the most significant bit.
inline std::vector<double> circuit_sz(int N, double J, double hx, double hz, double dt, int steps,
                                      const std::vector<int>& down) {
  Eigen::Matrix2cd X, Z, I2;
  X << 0, 1, 1, 0;
  Z << 1, 0, 0, -1;
  I2.setIdentity();
  auto kron2 = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
  };
  const int64_t dim = int64_t{1} << N;
  std::vector<SpMat> gates;
  for (int b = 0; b + 1 < N; ++b) {
    double cl = (b == 0) ? 1.0 : 0.5, cr = (b == N - 2) ? 1.0 : 0.5;
    Eigen::Matrix4cd h = J * kron2(Z, Z) + cl * (hz * kron2(Z, I2) + hx * kron2(X, I2)) +
                         cr * (hz * kron2(I2, Z) + hx * kron2(I2, X));
    Eigen::Matrix4cd u = unitary_4x4(h, dt);
    SpMat g = u.sparseView(0.0, 0.0);
    gates.push_back(sparse_kron(sparse_kron(sparse_identity(int64_t{1} << b), g),
                                sparse_identity(int64_t{1} << (N - 2 - b))));
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  int64_t s0 = 0;
  for (int q = 0; q < N; ++q) s0 = (s0 << 1) | down[static_cast<size_t>(q)];
  psi(s0) = 1.0;
  const int c = (N + 1) / 2 - 1;
  auto measure = [&] {
    double m = 0.0;
    for (int64_t s = 0; s < dim; ++s) m += std::norm(psi(s)) * ((s >> (N - 1 - c) & 1) ? -1.0 : 1.0);
    return m;
  };
  std::vector<double> out{measure()};
  for (int t = 0; t < steps; ++t) {
    for (int b = 0; b + 1 < N; b += 2) psi = gates[static_cast<size_t>(b)] * psi;
    for (int b = 1; b + 1 < N; b += 2) psi = gates[static_cast<size_t>(b)] * psi;
    out.push_back(measure());
  }
  return out;
}

}  // namespace oracle
