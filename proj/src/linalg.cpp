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

#include "tnx/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unsupported/Eigen/MatrixFunctions>

namespace tnx::linalg {

namespace {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One stored block placed inside its group matrix.
struct Part {
  int64_t block;
  size_t row, col;  // tuple indices within the group
};

// Row-flux sector of the matrix view.
struct Group {
  Qn flux;
  std::vector<std::vector<int64_t>> rows, cols;  // sector tuples
  std::vector<int64_t> row_size, col_size, row_off, col_off;
  int64_t m = 0, n = 0;
  std::vector<Part> parts;
};

struct View {
  int64_t rowrank = 0;
  bool symmetric = false;
  std::vector<Group> groups;
};

View matricize(const UniTensor& M) {
  const int64_t r = M.rowrank();
  if (r <= 0 || r >= M.rank())
    throw std::invalid_argument("matrix view needs 0 < rowrank < rank (rowrank " + std::to_string(r) + ", rank " +
                                std::to_string(M.rank()) + ")");
  View v;
  v.rowrank = r;
  v.symmetric = M.is_symmetric();
  if (!v.symmetric) {
    Group g;
    g.rows = {{}};
    g.cols = {{}};
    int64_t m = 1, n = 1;
    for (int64_t i = 0; i < M.rank(); ++i) (i < r ? m : n) *= M.bond(i).dim();
    g.row_size = {m};
    g.col_size = {n};
    g.parts.push_back({0, 0, 0});
    v.groups.push_back(std::move(g));
  } else {
    const auto syms = M.syms();
    std::map<Qn, size_t> by_flux;
    std::vector<std::map<std::vector<int64_t>, size_t>> row_idx, col_idx;
    for (int64_t k = 0; k < M.Nblocks(); ++k) {
      const auto& qi = M.qn_indices(k);
      std::vector<int64_t> rt(qi.begin(), qi.begin() + r), ct(qi.begin() + r, qi.end());
      Qn f = qn_identity(syms);
      for (int64_t i = 0; i < r; ++i)
        f = qn_combine(syms, f, flux_contribution(M.bond(i), static_cast<size_t>(qi[static_cast<size_t>(i)])));
      auto [it, fresh] = by_flux.emplace(f, v.groups.size());
      if (fresh) {
        v.groups.push_back(Group{f, {}, {}, {}, {}, {}, {}, 0, 0, {}});
        row_idx.emplace_back();
        col_idx.emplace_back();
      }
      Group& g = v.groups[it->second];
      auto& ri = row_idx[it->second];
      auto& ci = col_idx[it->second];
      auto [rit, rnew] = ri.emplace(rt, g.rows.size());
      if (rnew) {
        int64_t s = 1;
        for (int64_t i = 0; i < r; ++i) s *= M.bond(i).deg(static_cast<size_t>(rt[static_cast<size_t>(i)]));
        g.rows.push_back(rt);
        g.row_size.push_back(s);
      }
      auto [cit, cnew] = ci.emplace(ct, g.cols.size());
      if (cnew) {
        int64_t s = 1;
        for (size_t i = 0; i < ct.size(); ++i) s *= M.bond(r + static_cast<int64_t>(i)).deg(static_cast<size_t>(ct[i]));
        g.cols.push_back(ct);
        g.col_size.push_back(s);
      }
      g.parts.push_back({k, rit->second, cit->second});
    }
  }
  for (auto& g : v.groups) {
    g.m = g.n = 0;
    for (auto s : g.row_size) {
      g.row_off.push_back(g.m);
      g.m += s;
    }
    for (auto s : g.col_size) {
      g.col_off.push_back(g.n);
      g.n += s;
    }
  }
  return v;
}

template <class T>
Mat<T> group_matrix(const UniTensor& M, const Group& g) {
  Mat<T> A = Mat<T>::Zero(g.m, g.n);
  for (const auto& p : g.parts) {
    DenseTensor b = M.block(p.block).contiguous().astype(dtype_of<T>());
    Eigen::Map<const RowMat<T>> src(b.data<T>(), g.row_size[p.row], g.col_size[p.col]);
    A.block(g.row_off[p.row], g.col_off[p.col], g.row_size[p.row], g.col_size[p.col]) = src;
  }
  return A;
}

template <class T>
DenseTensor to_tensor(const Eigen::Ref<const Mat<T>>& X, const Shape& shape) {
  DenseTensor t(shape, dtype_of<T>());
  Eigen::Map<RowMat<T>>(t.data<T>(), X.rows(), X.cols()) = X;
  return t;
}

std::string fresh_label(const std::string& base, const UniTensor& M) {
  std::string l = base;
  for (int i = 1; M.label_index(l) >= 0; ++i) l = base + "_" + std::to_string(i);
  return l;
}

// Bond between the factors. kept[g] = number of states of group g (0 drops it).
Bond aux_bond(const UniTensor& M, const View& v, const std::vector<int64_t>& kept, BondType dir) {
  if (v.symmetric) {
    std::vector<Sector> sec;
    for (size_t g = 0; g < v.groups.size(); ++g)
      if (kept[g] > 0) sec.push_back({v.groups[g].flux, kept[g]});
    return Bond(dir, sec, M.syms());
  }
  return Bond(kept[0], M.is_tagged() ? dir : BondType::REGULAR);
}

Shape row_shape(const UniTensor& M, const View& v, const std::vector<int64_t>& tuple) {
  Shape s;
  for (int64_t i = 0; i < v.rowrank; ++i)
    s.push_back(v.symmetric ? M.bond(i).deg(static_cast<size_t>(tuple[static_cast<size_t>(i)])) : M.bond(i).dim());
  return s;
}

Shape col_shape(const UniTensor& M, const View& v, const std::vector<int64_t>& tuple) {
  Shape s;
  for (int64_t i = v.rowrank; i < M.rank(); ++i)
    s.push_back(v.symmetric ? M.bond(i).deg(static_cast<size_t>(tuple[static_cast<size_t>(i - v.rowrank)]))
                            : M.bond(i).dim());
  return s;
}

std::vector<Bond> row_bonds(const UniTensor& M, int64_t r) {
  return {M.bonds().begin(), M.bonds().begin() + r};
}
std::vector<Bond> col_bonds(const UniTensor& M, int64_t r) {
  return {M.bonds().begin() + r, M.bonds().end()};
}
std::vector<std::string> row_labels(const UniTensor& M, int64_t r) {
  return {M.labels().begin(), M.labels().begin() + r};
}
std::vector<std::string> col_labels(const UniTensor& M, int64_t r) {
  return {M.labels().begin() + r, M.labels().end()};
}

// Per-group factor data gathered before the output tensors are assembled.
template <class T, class D>
struct Factors {
  std::vector<Mat<T>> left;   // m_g x k_g
  std::vector<Eigen::Matrix<D, Eigen::Dynamic, 1>> diag;
  std::vector<Mat<T>> right;  // k_g x n_g
};

// Left factor (rows..., aux OUT) from per-group m_g x k_g matrices.
template <class T>
UniTensor build_left(const UniTensor& M, const View& v, const std::vector<Mat<T>>& L,
                     const std::vector<int64_t>& kept, const std::string& aux, const std::string& name) {
  auto bonds = row_bonds(M, v.rowrank);
  bonds.push_back(aux_bond(M, v, kept, BondType::OUT));
  auto labels = row_labels(M, v.rowrank);
  labels.push_back(aux);
  std::vector<DenseTensor> blocks;
  std::vector<std::vector<int64_t>> qis;
  int64_t sector = 0;
  for (size_t g = 0; g < v.groups.size(); ++g) {
    if (kept[g] == 0) continue;
    const Group& gr = v.groups[g];
    for (size_t ri = 0; ri < gr.rows.size(); ++ri) {
      Shape s = row_shape(M, v, gr.rows[ri]);
      s.push_back(kept[g]);
      blocks.push_back(to_tensor<T>(L[g].block(gr.row_off[ri], 0, gr.row_size[ri], kept[g]), s));
      auto qi = gr.rows[ri];
      qi.push_back(sector);
      qis.push_back(std::move(qi));
    }
    ++sector;
  }
  if (!v.symmetric) qis.clear();
  return UniTensor::from_blocks(bonds, labels, v.rowrank, std::move(blocks), std::move(qis), name);
}

// Right factor (aux IN, cols...) from per-group k_g x n_g matrices.
template <class T>
UniTensor build_right(const UniTensor& M, const View& v, const std::vector<Mat<T>>& R,
                      const std::vector<int64_t>& kept, const std::string& aux, const std::string& name) {
  std::vector<Bond> bonds{aux_bond(M, v, kept, BondType::IN)};
  for (const auto& b : col_bonds(M, v.rowrank)) bonds.push_back(b);
  std::vector<std::string> labels{aux};
  for (const auto& l : col_labels(M, v.rowrank)) labels.push_back(l);
  std::vector<DenseTensor> blocks;
  std::vector<std::vector<int64_t>> qis;
  int64_t sector = 0;
  for (size_t g = 0; g < v.groups.size(); ++g) {
    if (kept[g] == 0) continue;
    const Group& gr = v.groups[g];
    for (size_t ci = 0; ci < gr.cols.size(); ++ci) {
      Shape s{kept[g]};
      for (auto d : col_shape(M, v, gr.cols[ci])) s.push_back(d);
      blocks.push_back(to_tensor<T>(R[g].block(0, gr.col_off[ci], kept[g], gr.col_size[ci]), s));
      std::vector<int64_t> qi{sector};
      qi.insert(qi.end(), gr.cols[ci].begin(), gr.cols[ci].end());
      qis.push_back(std::move(qi));
    }
    ++sector;
  }
  if (!v.symmetric) qis.clear();
  return UniTensor::from_blocks(bonds, labels, 1, std::move(blocks), std::move(qis), name);
}

// Diagonal k x k tensor (auxL IN, auxR OUT).
template <class D>
UniTensor build_diag(const UniTensor& M, const View& v, const std::vector<Eigen::Matrix<D, Eigen::Dynamic, 1>>& d,
                     const std::vector<int64_t>& kept, const std::string& auxL, const std::string& auxR,
                     const std::string& name) {
  std::vector<Bond> bonds{aux_bond(M, v, kept, BondType::IN), aux_bond(M, v, kept, BondType::OUT)};
  std::vector<DenseTensor> blocks;
  std::vector<std::vector<int64_t>> qis;
  int64_t sector = 0;
  for (size_t g = 0; g < v.groups.size(); ++g) {
    if (kept[g] == 0) continue;
    Mat<D> X = d[g].head(kept[g]).asDiagonal();
    blocks.push_back(to_tensor<D>(X, {kept[g], kept[g]}));
    qis.push_back({sector, sector});
    ++sector;
  }
  if (!v.symmetric) qis.clear();
  return UniTensor::from_blocks(bonds, {auxL, auxR}, 1, std::move(blocks), std::move(qis), name);
}

template <class T>
struct SvdParts {
  View view;
  std::vector<Mat<T>> U, Vh;
  std::vector<Eigen::VectorXd> s;
};

template <class T>
SvdParts<T> svd_parts(const UniTensor& M, bool vectors) {
  SvdParts<T> p;
  p.view = matricize(M);
  for (const auto& g : p.view.groups) {
    Mat<T> A = group_matrix<T>(M, g);
    const unsigned opts = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0;
    Eigen::BDCSVD<Mat<T>> svd(A, opts);
    p.s.push_back(svd.singularValues());
    if (vectors) {
      p.U.push_back(svd.matrixU());
      p.Vh.push_back(svd.matrixV().adjoint());
    }
  }
  return p;
}

template <class T>
SvdTruncResult svd_assemble(const UniTensor& M, const SvdParts<T>& p, const std::vector<int64_t>& kept, bool vectors) {
  SvdTruncResult r;
  const std::string aL = fresh_label("_aux_L", M), aR = fresh_label("_aux_R", M);
  r.S = build_diag<double>(M, p.view, p.s, kept, aL, aR, "S");
  if (vectors) {
    r.U = build_left<T>(M, p.view, p.U, kept, aL, "U");
    r.Vdag = build_right<T>(M, p.view, p.Vh, kept, aR, "Vdag");
  }
  return r;
}

bool is_complex(const UniTensor& M) { return M.dtype() == DType::Complex128; }

std::vector<int64_t> full_counts(const std::vector<Eigen::VectorXd>& s) {
  std::vector<int64_t> k;
  for (const auto& x : s) k.push_back(static_cast<int64_t>(x.size()));
  return k;
}

template <class T>
SvdTruncResult svd_truncate_impl(const UniTensor& M, int64_t keepdim, double err, int return_err,
                                 const std::vector<int64_t>& min_blockdim) {
  SvdParts<T> p = svd_parts<T>(M, true);
  const size_t G = p.s.size();
  if (!min_blockdim.empty() && min_blockdim.size() != G)
    throw std::invalid_argument("min_blockdim has " + std::to_string(min_blockdim.size()) + " entries for " +
                                std::to_string(G) + " blocks");
  std::vector<int64_t> kept(G, 0);
  int64_t total = 0;
  for (size_t g = 0; g < G; ++g) {
    if (!min_blockdim.empty()) {
      if (min_blockdim[g] < 0) throw std::invalid_argument("min_blockdim entries must be non-negative");
      kept[g] = std::min<int64_t>(min_blockdim[g], p.s[g].size());
    }
    total += kept[g];
  }
  struct Cand {
    double val;
    size_t g;
    int64_t pos;
  };
  std::vector<Cand> cand;
  for (size_t g = 0; g < G; ++g)
    for (int64_t i = kept[g]; i < p.s[g].size(); ++i) cand.push_back({p.s[g][i], g, i});
  std::stable_sort(cand.begin(), cand.end(), [](const Cand& a, const Cand& b) {
    if (a.val != b.val) return a.val > b.val;
    if (a.g != b.g) return a.g < b.g;
    return a.pos < b.pos;
  });
  size_t taken = 0;
  while (taken < cand.size() && total < keepdim && cand[taken].val > err) {
    ++kept[cand[taken].g];
    ++total;
    ++taken;
  }
  if (total == 0 && !cand.empty()) {
    ++kept[cand[0].g];
    ++taken;
  }
  SvdTruncResult r = svd_assemble<T>(M, p, kept, true);
  if (return_err != 0) {
    std::vector<double> dropped;
    for (size_t i = taken; i < cand.size(); ++i) dropped.push_back(cand[i].val);
    if (dropped.empty()) dropped.push_back(0.0);
    if (return_err == 1) dropped.resize(1);
    r.s_err = UniTensor(DenseTensor::from_vector(dropped, {static_cast<int64_t>(dropped.size())}), 0, {}, "s_err");
  }
  return r;
}

double hermitian_defect(const std::vector<double>& num, const std::vector<double>& den) {
  double a = 0, b = 0;
  for (auto x : num) a += x;
  for (auto x : den) b += x;
  return b == 0 ? 0.0 : std::sqrt(a / b);
}

template <class T>
EigResult eigh_impl(const UniTensor& M, bool is_V) {
  View v = matricize(M);
  std::vector<Mat<T>> Vs;
  std::vector<Eigen::VectorXd> ws;
  std::vector<double> num, den;
  for (const auto& g : v.groups) {
    if (g.m != g.n)
      throw std::invalid_argument("Eigh needs a square matrix view, got " + std::to_string(g.m) + " x " +
                                  std::to_string(g.n));
    Mat<T> A = group_matrix<T>(M, g);
    num.push_back((A - A.adjoint()).squaredNorm());
    den.push_back(A.squaredNorm());
    Eigen::SelfAdjointEigenSolver<Mat<T>> es(A, is_V ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    ws.push_back(es.eigenvalues());
    if (is_V) Vs.push_back(es.eigenvectors());
  }
  if (hermitian_defect(num, den) > 1e-10) throw std::invalid_argument("Eigh input is not Hermitian");
  auto kept = full_counts(ws);
  EigResult r;
  const std::string aL = fresh_label("_aux_L", M), aR = fresh_label("_aux_R", M);
  r.eigvals = build_diag<double>(M, v, ws, kept, aL, aR, "eigvals");
  if (is_V) r.V = build_left<T>(M, v, Vs, kept, aL, "V");
  return r;
}

template <class T>
QrResult qr_impl(const UniTensor& M) {
  View v = matricize(M);
  std::vector<Mat<T>> Qs, Rs;
  std::vector<int64_t> kept;
  for (const auto& g : v.groups) {
    Mat<T> A = group_matrix<T>(M, g);
    Eigen::HouseholderQR<Mat<T>> qr(A);
    const int64_t k = std::min(g.m, g.n);
    Qs.push_back(qr.householderQ() * Mat<T>::Identity(g.m, k));
    Mat<T> R = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
    Rs.push_back(R);
    kept.push_back(k);
  }
  const std::string aL = fresh_label("_aux_L", M);
  return {build_left<T>(M, v, Qs, kept, aL, "Q"), build_right<T>(M, v, Rs, kept, aL, "R")};
}

template <class T>
UniTensor expm_impl(const UniTensor& M, const Scalar& a, const Scalar& b) {
  View v = matricize(M);
  const T av = a.as<T>(), bv = b.as<T>();
  std::vector<DenseTensor> blocks(static_cast<size_t>(M.Nblocks()));
  for (const auto& g : v.groups) {
    if (g.m != g.n)
      throw std::invalid_argument("ExpM needs a square matrix view, got " + std::to_string(g.m) + " x " +
                                  std::to_string(g.n));
    Mat<T> A = group_matrix<T>(M, g);
    Mat<T> E;
    const double scale = A.norm();
    if ((A - A.adjoint()).norm() <= 1e-10 * scale) {
      Eigen::SelfAdjointEigenSolver<Mat<T>> es(A);
      Eigen::Matrix<T, Eigen::Dynamic, 1> d(g.m);
      for (int64_t i = 0; i < g.m; ++i) d[i] = std::exp(av * es.eigenvalues()[i] + bv);
      E = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
    } else {
      Mat<T> X = av * A + bv * Mat<T>::Identity(g.m, g.n);
      E = X.exp();
    }
    for (const auto& p : g.parts) {
      Shape s = row_shape(M, v, g.rows[p.row]);
      for (auto d : col_shape(M, v, g.cols[p.col])) s.push_back(d);
      blocks[static_cast<size_t>(p.block)] =
          to_tensor<T>(E.block(g.row_off[p.row], g.col_off[p.col], g.row_size[p.row], g.col_size[p.col]), s);
    }
  }
  std::vector<std::vector<int64_t>> qis;
  if (v.symmetric)
    for (int64_t k = 0; k < M.Nblocks(); ++k) qis.push_back(M.qn_indices(k));
  return UniTensor::from_blocks(M.bonds(), M.labels(), M.rowrank(), std::move(blocks), std::move(qis), M.name());
}

}  // namespace

SvdResult Svd(const UniTensor& M, bool is_UvT) {
  SvdTruncResult r;
  if (is_complex(M)) {
    auto p = svd_parts<cplx>(M, is_UvT);
    r = svd_assemble<cplx>(M, p, full_counts(p.s), is_UvT);
  } else {
    auto p = svd_parts<double>(M, is_UvT);
    r = svd_assemble<double>(M, p, full_counts(p.s), is_UvT);
  }
  return {r.S, r.U, r.Vdag};
}

SvdTruncResult Svd_truncate(const UniTensor& M, int64_t keepdim, double err, int return_err,
                            const std::vector<int64_t>& min_blockdim) {
  if (keepdim < 1) throw std::invalid_argument("keepdim must be at least 1");
  if (return_err < 0 || return_err > 2) throw std::invalid_argument("return_err must be 0, 1 or 2");
  if (is_complex(M)) return svd_truncate_impl<cplx>(M, keepdim, err, return_err, min_blockdim);
  return svd_truncate_impl<double>(M, keepdim, err, return_err, min_blockdim);
}

std::vector<DenseTensor> singular_values(const UniTensor& S) {
  if (S.rank() != 2) throw std::invalid_argument("singular_values expects a rank-2 diagonal tensor");
  std::vector<DenseTensor> out;
  for (int64_t k = 0; k < S.Nblocks(); ++k) {
    const DenseTensor& b = S.block(k);
    const int64_t n = std::min(b.shape()[0], b.shape()[1]);
    DenseTensor d({n}, b.dtype());
    for (int64_t i = 0; i < n; ++i) d.set(std::vector<int64_t>{i}, b.get(std::vector<int64_t>{i, i}));
    out.push_back(d);
  }
  return out;
}

EigResult Eigh(const UniTensor& M, bool is_V) {
  if (is_complex(M)) return eigh_impl<cplx>(M, is_V);
  return eigh_impl<double>(M, is_V);
}

EigResult Eig(const UniTensor& M, bool is_V) {
  View v = matricize(M);
  std::vector<Mat<cplx>> Vs;
  std::vector<Eigen::VectorXcd> ws;
  for (const auto& g : v.groups) {
    if (g.m != g.n)
      throw std::invalid_argument("Eig needs a square matrix view, got " + std::to_string(g.m) + " x " +
                                  std::to_string(g.n));
    Mat<cplx> A = group_matrix<cplx>(M, g);
    Eigen::ComplexEigenSolver<Mat<cplx>> es(A, is_V);
    ws.push_back(es.eigenvalues());
    if (is_V) Vs.push_back(es.eigenvectors());
  }
  std::vector<int64_t> kept;
  for (const auto& w : ws) kept.push_back(w.size());
  EigResult r;
  const std::string aL = fresh_label("_aux_L", M), aR = fresh_label("_aux_R", M);
  r.eigvals = build_diag<cplx>(M, v, ws, kept, aL, aR, "eigvals");
  if (is_V) r.V = build_left<cplx>(M, v, Vs, kept, aL, "V");
  return r;
}

QrResult Qr(const UniTensor& M) {
  if (is_complex(M)) return qr_impl<cplx>(M);
  return qr_impl<double>(M);
}

UniTensor ExpM(const UniTensor& M, const Scalar& a, const Scalar& b) {
  const bool cx = is_complex(M) || a.dtype() == DType::Complex128 || b.dtype() == DType::Complex128;
  if (cx) return expm_impl<cplx>(M, a, b);
  return expm_impl<double>(M, a, b);
}

}  // namespace tnx::linalg
