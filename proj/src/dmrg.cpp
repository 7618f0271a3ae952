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

#include "tnx/dmrg.hpp"

#include <cmath>
#include <stdexcept>

#include "tnx/contract.hpp"
#include "tnx/network.hpp"

namespace tnx::apps {

namespace {

using Labels = std::vector<std::string>;
const std::vector<Symmetry> kU1{Symmetry::U1()};

Bond phys_bond(BondType t) { return Bond(t, {{{+1}, 1}, {{-1}, 1}}, kU1); }
Bond mpo_bond(BondType t) { return Bond(t, {{{0}, 2}, {{+2}, 1}, {{-2}, 1}}, kU1); }

void check_chain(int64_t N) {
  if (N < 2) throw std::invalid_argument("the chain needs at least two sites");
}

}  // namespace

XXMpo build_xx_mpo(int64_t N, bool symmetric) {
  check_chain(N);
  // (wl, wr, po, pi, value)
  struct Entry {
    int64_t wl, wr, po, pi;
    double v;
  };
  const std::vector<Entry> entries{
      {0, 0, 0, 0, 1.0}, {0, 0, 1, 1, 1.0},  // finished
      {1, 1, 0, 0, 1.0}, {1, 1, 1, 1, 1.0},  // not started
      {1, 2, 0, 1, 0.5}, {2, 0, 1, 0, 1.0},  // S+ then S-
      {1, 3, 1, 0, 0.5}, {3, 0, 0, 1, 1.0},  // S- then S+
  };
  const std::vector<std::string> wl{"wl", "wr", "po", "pi"};
  UniTensor W, left, right;
  if (symmetric) {
    W = UniTensor({mpo_bond(BondType::IN), mpo_bond(BondType::OUT), phys_bond(BondType::IN), phys_bond(BondType::OUT)},
                  wl, 2);
    left = UniTensor({mpo_bond(BondType::OUT)}, {"w"}, 0);
    right = UniTensor({mpo_bond(BondType::IN)}, {"w"}, 0);
  } else {
    W = UniTensor(DenseTensor::zeros({kMpoDim, kMpoDim, kPhysDim, kPhysDim}), 2, wl);
    left = UniTensor(DenseTensor::zeros({kMpoDim}), 0, {"w"});
    right = UniTensor(DenseTensor::zeros({kMpoDim}), 0, {"w"});
  }
  for (const auto& e : entries) W.set_elem({e.wl, e.wr, e.po, e.pi}, e.v);
  left.set_elem({1}, 1.0);
  right.set_elem({0}, 1.0);
  XXMpo mpo;
  for (int64_t j = 0; j < N; ++j) mpo.W.push_back(j == 0 ? W : W.clone());
  mpo.left = left;
  mpo.right = right;
  return mpo;
}

std::vector<UniTensor> random_mps(int64_t N, int64_t D, uint64_t seed) {
  check_chain(N);
  auto dim = [&](int64_t j) {
    int64_t d = 1;
    for (int64_t k = 0; k < std::min(j, N - j) && d < D; ++k) d *= kPhysDim;
    return std::min(d, D);
  };
  std::vector<UniTensor> mps;
  for (int64_t j = 0; j < N; ++j)
    mps.emplace_back(DenseTensor::normal({dim(j), kPhysDim, dim(j + 1)}, 0.0, 1.0, seed + static_cast<uint64_t>(j)),
                     2, std::vector<std::string>{"l", "p", "r"});
  return mps;
}

std::vector<UniTensor> product_mps(const std::vector<int>& spins) {
  check_chain(static_cast<int64_t>(spins.size()));
  std::vector<UniTensor> mps;
  int64_t q = 0;
  for (int s : spins) {
    if (s != 1 && s != -1) throw std::invalid_argument("product_mps expects spins +1 or -1");
    Bond l(BondType::IN, {{{q}, 1}}, kU1);
    Bond r(BondType::OUT, {{{q + s}, 1}}, kU1);
    UniTensor A({l, phys_bond(BondType::IN), r}, {"l", "p", "r"}, 2);
    A.set_elem({0, s == 1 ? 0 : 1, 0}, 1.0);
    mps.push_back(A);
    q += s;
  }
  return mps;
}

UniTensor left_boundary(const XXMpo& mpo, const UniTensor& first_site) {
  const Bond& l = first_site.bond("l");
  UniTensor L({l, mpo.left.bond(0), l.redirect()}, {"out", "w", "in"}, 1, first_site.dtype());
  for (int64_t w = 0; w < mpo.left.bond(0).dim(); ++w) {
    if (!mpo.left.elem_exists({w})) continue;
    const Scalar v = mpo.left.get_elem({w});
    if (v == Scalar(0.0)) continue;
    for (int64_t a = 0; a < l.dim(); ++a) L.set_elem({a, w, a}, v);
  }
  return L;
}

UniTensor right_boundary(const XXMpo& mpo, const UniTensor& last_site) {
  const Bond& r = last_site.bond("r");
  UniTensor R({r.redirect(), mpo.right.bond(0), r}, {"in", "w", "out"}, 1, last_site.dtype());
  for (int64_t w = 0; w < mpo.right.bond(0).dim(); ++w) {
    if (!mpo.right.elem_exists({w})) continue;
    const Scalar v = mpo.right.get_elem({w});
    if (v == Scalar(0.0)) continue;
    for (int64_t a = 0; a < r.dim(); ++a) R.set_elem({a, w, a}, v);
  }
  return R;
}

UniTensor grow_left(const UniTensor& L, const UniTensor& A, const UniTensor& W) {
  UniTensor Lr = L.relabel({"out", "w", "in"}, {"_bo", "_w", "_ki"});
  UniTensor Ar = A.relabel({"l", "p", "r"}, {"_ki", "_s", "_kn"});
  UniTensor Wr = W.relabel({"wl", "wr", "po", "pi"}, {"_w", "_wn", "_so", "_s"});
  UniTensor Br = A.Dagger().relabel({"l", "p", "r"}, {"_bo", "_so", "_bn"});
  UniTensor X = Contract(Contract(Contract(Lr, Ar), Wr), Br);
  return X.permute({"_bn", "_wn", "_kn"}, 1).relabel({"out", "w", "in"}).contiguous();
}

UniTensor grow_right(const UniTensor& R, const UniTensor& A, const UniTensor& W) {
  UniTensor Rr = R.relabel({"in", "w", "out"}, {"_ki", "_w", "_bo"});
  UniTensor Ar = A.relabel({"l", "p", "r"}, {"_kn", "_s", "_ki"});
  UniTensor Wr = W.relabel({"wl", "wr", "po", "pi"}, {"_wn", "_w", "_so", "_s"});
  UniTensor Br = A.Dagger().relabel({"l", "p", "r"}, {"_bn", "_so", "_bo"});
  UniTensor X = Contract(Contract(Contract(Rr, Ar), Wr), Br);
  return X.permute({"_kn", "_wn", "_bn"}, 1).relabel({"in", "w", "out"}).contiguous();
}

namespace {

int64_t element_count(const UniTensor& t) {
  int64_t n = 0;
  for (int64_t k = 0; k < t.Nblocks(); ++k) n += t.block(k).size();
  return n;
}

const std::vector<std::string> kHpsiNet{
    "L: lo, lw, li",        "psi: li, p1, p2, ri", "W1: lw, mw, s1, p1", "W2: mw, rw, s2, p2",
    "R: ri, rw, ro",        "TOUT: lo, s1 ; s2, ro", "ORDER: ((((L,psi),W1),W2),R)",
};

}  // namespace

EffectiveHamiltonian::EffectiveHamiltonian(const UniTensor& L, const UniTensor& W1, const UniTensor& W2,
                                           const UniTensor& R, const UniTensor& psi_like)
    : LinOp(element_count(psi_like), true), L_(L), W1_(W1), W2_(W2), R_(R) {}

UniTensor EffectiveHamiltonian::matvec(const UniTensor& psi) const {
  Network net = Network::from_string(kHpsiNet);
  net.put_tensor("L", L_, {"out", "w", "in"});
  net.put_tensor("W1", W1_, {"wl", "wr", "po", "pi"});
  net.put_tensor("W2", W2_, {"wl", "wr", "po", "pi"});
  net.put_tensor("R", R_, {"in", "w", "out"});
  net.put_tensor("psi", psi, {"l", "p1", "p2", "r"});
  return net.launch().relabel({"l", "p1", "p2", "r"});
}

DmrgResult dmrg_ground_state(const DmrgConfig& cfg) {
  const int64_t N = cfg.N;
  if (N < 4 || N % 2 != 0) throw std::invalid_argument("DMRG needs an even number of sites N >= 4");
  if (cfg.D < 2) throw std::invalid_argument("DMRG needs bond dimension D >= 2");
  if (cfg.sweeps < 1) throw std::invalid_argument("DMRG needs at least one sweep");
  const XXMpo mpo = build_xx_mpo(N, cfg.symmetric);
  std::vector<UniTensor> mps;
  if (cfg.symmetric) {
    std::vector<int> neel;
    for (int64_t j = 0; j < N; ++j) neel.push_back(j % 2 == 0 ? 1 : -1);
    mps = product_mps(neel);
  } else {
    mps = random_mps(N, cfg.D, cfg.seed);
  }
  // Right-canonical form.
  for (int64_t j = N - 1; j > 0; --j) {
    auto svd = linalg::Svd(mps[j].permute({"l", "p", "r"}, 1));
    UniTensor US = Contract(svd.U, svd.S).relabel(Labels{"l", svd.S.labels()[1]}, Labels{"_c", "r"});
    mps[j] = svd.Vdag.relabel(svd.Vdag.labels()[0], "l").set_rowrank(2);
    mps[j - 1] = Contract(mps[j - 1].relabel("r", "_c"), US);
  }
  mps[0] /= mps[0].Norm();

  std::vector<UniTensor> L(N), R(N + 1);
  L[0] = left_boundary(mpo, mps[0]);
  R[N] = right_boundary(mpo, mps[N - 1]);
  for (int64_t j = N - 1; j >= 2; --j) R[j] = grow_right(R[j + 1], mps[j], mpo.W[j]);

  DmrgResult res;
  double energy = 0.0;
  auto update = [&](int64_t i, bool to_right, int64_t sweep) {
    UniTensor psi = Contract(mps[i].relabel(Labels{"p", "r"}, Labels{"p1", "_m"}), mps[i + 1].relabel(Labels{"l", "p"}, Labels{"_m", "p2"}));
    EffectiveHamiltonian H(L[i], mpo.W[i], mpo.W[i + 1], R[i + 2], psi);
    linalg::LanczosResult lr;
    try {
      lr = linalg::Lanczos(H, psi, 1, cfg.lanczos_tol, cfg.lanczos_max_iter, cfg.seed);
    } catch (const linalg::ConvergenceError& e) {
      throw linalg::ConvergenceError("sweep " + std::to_string(sweep) + ", sites " + std::to_string(i) + "," +
                                         std::to_string(i + 1) + ": " + e.what(),
                                     e.best());
    }
    energy = lr.eigenvalues[0];
    auto sv = linalg::Svd_truncate(lr.eigenvectors[0].set_rowrank(2), cfg.D, 1e-12);
    UniTensor S = sv.S / sv.S.Norm();
    const std::string aL = sv.S.labels()[0], aR = sv.S.labels()[1];
    if (to_right) {
      mps[i] = sv.U.relabel(Labels{"p1", aL}, Labels{"p", "r"});
      mps[i + 1] = Contract(S, sv.Vdag).relabel(Labels{aL, "p2"}, Labels{"l", "p"}).set_rowrank(2);
      L[i + 1] = grow_left(L[i], mps[i], mpo.W[i]);
    } else {
      mps[i] = Contract(sv.U, S).relabel(Labels{"p1", aR}, Labels{"p", "r"});
      mps[i + 1] = sv.Vdag.relabel(Labels{aR, "p2"}, Labels{"l", "p"}).set_rowrank(2);
      R[i + 1] = grow_right(R[i + 2], mps[i + 1], mpo.W[i + 1]);
    }
  };
  for (int64_t s = 0; s < cfg.sweeps; ++s) {
    for (int64_t i = 0; i <= N - 2; ++i) update(i, true, s);
    for (int64_t i = N - 2; i >= 0; --i) update(i, false, s);
    res.sweep_energies.push_back(energy);
  }
  res.energy = energy;
  res.mps = mps;
  return res;
}

}  // namespace tnx::apps
