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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "tnx/linalg.hpp"

namespace tnx::linalg {

namespace {

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
Vec<T> flatten(const UniTensor& t) {
  int64_t n = 0;
  for (int64_t k = 0; k < t.Nblocks(); ++k) n += t.block(k).size();
  Vec<T> v(n);
  int64_t off = 0;
  for (int64_t k = 0; k < t.Nblocks(); ++k) {
    auto x = t.block(k).template to_vector<T>();
    std::copy(x.begin(), x.end(), v.data() + off);
    off += static_cast<int64_t>(x.size());
  }
  return v;
}

template <class T>
UniTensor unflatten(const UniTensor& like, const Vec<T>& v) {
  std::vector<DenseTensor> blocks;
  std::vector<std::vector<int64_t>> qis;
  int64_t off = 0;
  for (int64_t k = 0; k < like.Nblocks(); ++k) {
    const Shape& s = like.block(k).shape();
    const int64_t n = shape_size(s);
    blocks.push_back(DenseTensor::from_vector(std::vector<T>(v.data() + off, v.data() + off + n), s));
    off += n;
    if (like.is_symmetric()) qis.push_back(like.qn_indices(k));
  }
  return UniTensor::from_blocks(like.bonds(), like.labels(), like.rowrank(), std::move(blocks), std::move(qis),
                                like.name());
}

template <class T>
void fill_random(Vec<T>& v, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  for (int64_t i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<T, cplx>)
      v[i] = cplx(nd(rng), nd(rng));
    else
      v[i] = nd(rng);
  }
}

// Orthogonalizes w against the columns of V twice; returns the final norm.
template <class T>
double orthogonalize(const std::vector<Vec<T>>& V, Vec<T>& w) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& v : V) w -= v * v.dot(w);
  return w.norm();
}

template <class T>
LanczosResult lanczos_impl(const LinOp& op, const UniTensor& like, Vec<T> start, int64_t k, double tol,
                           int64_t max_iter, std::mt19937_64& rng) {
  const int64_t n = start.size();
  const int64_t m = std::min<int64_t>(n, std::max<int64_t>(2 * k + 10, 20));
  auto apply = [&](const Vec<T>& x, int64_t& count) {
    ++count;
    UniTensor y = op.matvec(unflatten<T>(like, x));
    Vec<T> fy = flatten<T>(y);
    if (fy.size() != n) throw std::invalid_argument("operator output size differs from its input size");
    return fy;
  };

  std::vector<Vec<T>> V, AV;
  int64_t count = 0;
  if (start.norm() == 0) fill_random(start, rng);
  Vec<T> next = start / start.norm();
  LanczosResult best;
  Eigen::VectorXd theta;
  Mat<T> Y;

  auto ritz = [&](bool& converged, Vec<T>& residual_dir) {
    const int64_t j = static_cast<int64_t>(V.size());
    Mat<T> H(j, j);
    for (int64_t a = 0; a < j; ++a)
      for (int64_t b = a; b < j; ++b) {
        H(a, b) = V[a].dot(AV[b]);
        H(b, a) = Eigen::numext::conj(H(a, b));
      }
    for (int64_t a = 0; a < j; ++a) H(a, a) = std::real(H(a, a));
    Eigen::SelfAdjointEigenSolver<Mat<T>> es(H);
    theta = es.eigenvalues();
    Y = es.eigenvectors();
    const int64_t want = std::min<int64_t>(k, j);
    converged = want == k;
    best = LanczosResult{};
    best.matvecs = count;
    residual_dir = Vec<T>();
    for (int64_t i = 0; i < want; ++i) {
      Vec<T> x = Vec<T>::Zero(n), ax = Vec<T>::Zero(n);
      for (int64_t a = 0; a < j; ++a) {
        x += V[a] * Y(a, i);
        ax += AV[a] * Y(a, i);
      }
      Vec<T> r = ax - theta[i] * x;
      const double res = r.norm();
      if (res > tol * std::max(1.0, std::abs(theta[i]))) {
        if (converged) residual_dir = r;
        converged = false;
      }
      best.eigenvalues.push_back(theta[i]);
      best.eigenvectors.push_back(unflatten<T>(like, Vec<T>(x / x.norm())));
    }
  };

  while (true) {
    // Expand the basis until it is full or the Krylov space closes.
    bool closed = false;
    while (static_cast<int64_t>(V.size()) < m) {
      if (count >= max_iter) break;
      V.push_back(next);
      AV.push_back(apply(next, count));
      Vec<T> w = AV.back();
      const double scale = std::max(w.norm(), 1.0);
      const double beta = orthogonalize(V, w);
      if (beta <= 1e-12 * scale) {
        closed = true;
        break;
      }
      next = w / beta;
    }
    bool converged = false;
    Vec<T> rdir;
    ritz(converged, rdir);
    if (converged) return best;
    if (count >= max_iter)
      throw ConvergenceError("Lanczos did not converge within " + std::to_string(max_iter) + " operator applications",
                             best);
    const int64_t j = static_cast<int64_t>(V.size());
    if (closed && j >= n)
      throw ConvergenceError("Lanczos exhausted the space without converging", best);
    // Thick restart: keep the lowest Ritz vectors, then continue from a residual.
    const int64_t p = closed ? std::min<int64_t>(j, m - 1) : std::min<int64_t>(j - 1, std::max<int64_t>(k, m / 2));
    std::vector<Vec<T>> NV, NAV;
    for (int64_t i = 0; i < std::max<int64_t>(p, 1); ++i) {
      Vec<T> x = Vec<T>::Zero(n), ax = Vec<T>::Zero(n);
      for (int64_t a = 0; a < j; ++a) {
        x += V[a] * Y(a, i);
        ax += AV[a] * Y(a, i);
      }
      NV.push_back(x);
      NAV.push_back(ax);
    }
    V = std::move(NV);
    AV = std::move(NAV);
    Vec<T> w = closed || rdir.size() == 0 ? Vec<T>(Vec<T>::Zero(n)) : rdir;
    if (orthogonalize(V, w) <= 1e-12 * std::max(1.0, rdir.size() ? rdir.norm() : 0.0)) {
      // Breakdown: continue from a fresh random direction.
      for (int attempt = 0;; ++attempt) {
        fill_random(w, rng);
        if (orthogonalize(V, w) > 1e-8) break;
        if (attempt > 10) throw ConvergenceError("Lanczos could not extend the basis", best);
      }
    }
    next = w / w.norm();
  }
}

}  // namespace

LanczosResult Lanczos(const LinOp& op, const UniTensor& v0, int64_t k, double tol, int64_t max_iter,
                      std::optional<uint64_t> seed) {
  if (!op.hermitian()) throw std::invalid_argument("Lanczos requires a Hermitian operator");
  if (k < 1) throw std::invalid_argument("Lanczos needs k >= 1");
  int64_t n = 0;
  for (int64_t b = 0; b < v0.Nblocks(); ++b) n += v0.block(b).size();
  if (n != op.dim())
    throw std::invalid_argument("start vector has " + std::to_string(n) + " elements, operator dimension is " +
                                std::to_string(op.dim()));
  if (k > n) throw std::invalid_argument("Lanczos needs dimension >= k");
  if (max_iter <= 0) max_iter = std::min<int64_t>(10 * n, 10000);
  std::mt19937_64 rng(seed ? *seed : std::random_device{}());
  if (v0.dtype() == DType::Complex128) return lanczos_impl<cplx>(op, v0, flatten<cplx>(v0), k, tol, max_iter, rng);
  // A real start vector stays real only if the operator maps it to a real vector.
  if (op.matvec(v0).dtype() == DType::Complex128) {
    UniTensor vc = v0.astype(DType::Complex128);
    return lanczos_impl<cplx>(op, vc, flatten<cplx>(vc), k, tol, max_iter, rng);
  }
  UniTensor vr = v0.astype(DType::Float64);
  return lanczos_impl<double>(op, vr, flatten<double>(vr), k, tol, max_iter, rng);
}

LanczosResult Lanczos(const LinOp& op, int64_t k, double tol, int64_t max_iter, std::optional<uint64_t> seed) {
  UniTensor v0(DenseTensor::normal({op.dim()}, 0.0, 1.0, seed), 0);
  return Lanczos(op, v0, k, tol, max_iter, seed ? std::optional<uint64_t>(*seed + 1) : std::nullopt);
}

}  // namespace tnx::linalg
