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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tnx/unitensor.hpp"

namespace tnx::linalg {

// All decompositions act on the matrix view of a tensor: the first rowrank bonds
// index rows, the rest index columns. Symmetric tensors decompose block by block,
// one block per row-flux sector.
//
// New internal bonds are labeled "_aux_L" (left factor side) and "_aux_R" (right
// factor side); a numeric suffix is added if a label is already taken. For a
// symmetric or directed input the left factor's new bond is OUT and the right
// factor's is IN, so every output stays flux-free.

struct SvdResult {
  UniTensor S;     ///< diagonal k x k, labels (_aux_L, _aux_R)
  UniTensor U;     ///< row labels + _aux_L (undefined when is_UvT is false)
  UniTensor Vdag;  ///< _aux_R + column labels (undefined when is_UvT is false)
};

struct SvdTruncResult {
  UniTensor S, U, Vdag;
  UniTensor s_err;  ///< undefined when return_err is 0
};

struct EigResult {
  UniTensor eigvals;  ///< diagonal, labels (_aux_L, _aux_R)
  UniTensor V;        ///< row labels + _aux_L (undefined when is_V is false)
};

struct QrResult {
  UniTensor Q;  ///< row labels + _aux_L
  UniTensor R;  ///< _aux_L + column labels, upper triangular
};

/// Full singular value decomposition; singular values descend within each block.
SvdResult Svd(const UniTensor& M, bool is_UvT = true);

/// SVD keeping at most keepdim singular values larger than err, chosen across all
/// blocks. min_blockdim (one entry per block of the full S) reserves a minimum
/// count per block regardless of keepdim and err, so the kept total can exceed
/// keepdim. At least one value is always kept. return_err = 1 yields the largest
/// discarded value, 2 yields all of them in descending order (0 if none).
SvdTruncResult Svd_truncate(const UniTensor& M, int64_t keepdim, double err = 0.0, int return_err = 0,
                            const std::vector<int64_t>& min_blockdim = {});

/// Diagonal of a diagonal tensor such as S, block by block, as 1-D tensors.
std::vector<DenseTensor> singular_values(const UniTensor& S);

/// Hermitian eigendecomposition; eigenvalues ascend within each block. Throws if
/// ||M - M^dagger|| > 1e-10 ||M||.
EigResult Eigh(const UniTensor& M, bool is_V = true);
/// General eigendecomposition with complex eigenvalues and right eigenvectors.
EigResult Eig(const UniTensor& M, bool is_V = true);

QrResult Qr(const UniTensor& M);

/// exp(a M + b I) on the matrix view.
UniTensor ExpM(const UniTensor& M, const Scalar& a = 1.0, const Scalar& b = 0.0);

// ---- iterative eigensolver ----

/// Linear map on UniTensors of a fixed structure.
class LinOp {
 public:
  explicit LinOp(int64_t dim, bool hermitian = true) : dim_(dim), hermitian_(hermitian) {}
  virtual ~LinOp() = default;
  virtual UniTensor matvec(const UniTensor& v) const = 0;
  int64_t dim() const { return dim_; }
  bool hermitian() const { return hermitian_; }

 private:
  int64_t dim_;
  bool hermitian_;
};

/// LinOp backed by a callable.
class FunctionLinOp : public LinOp {
 public:
  FunctionLinOp(int64_t dim, std::function<UniTensor(const UniTensor&)> f, bool hermitian = true)
      : LinOp(dim, hermitian), f_(std::move(f)) {}
  UniTensor matvec(const UniTensor& v) const override { return f_(v); }

 private:
  std::function<UniTensor(const UniTensor&)> f_;
};

struct LanczosResult {
  std::vector<double> eigenvalues;      ///< ascending
  std::vector<UniTensor> eigenvectors;  ///< unit norm, same structure as v0
  int64_t matvecs = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, LanczosResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const LanczosResult& best() const { return best_; }

 private:
  LanczosResult best_;
};

/// k lowest eigenpairs of a Hermitian operator by thick-restart Lanczos with
/// full reorthogonalization. Converged when ||op(v) - lambda v|| <= tol max(1,|lambda|).
/// max_iter bounds the number of matvecs; a non-positive value means
/// min(10 dim, 10000).
LanczosResult Lanczos(const LinOp& op, const UniTensor& v0, int64_t k = 1, double tol = 1e-12,
                      int64_t max_iter = -1, std::optional<uint64_t> seed = std::nullopt);
/// As above with a random rank-1 start vector of length op.dim().
LanczosResult Lanczos(const LinOp& op, int64_t k = 1, double tol = 1e-12, int64_t max_iter = -1,
                      std::optional<uint64_t> seed = std::nullopt);

}  // namespace tnx::linalg
