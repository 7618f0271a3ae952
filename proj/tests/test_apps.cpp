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

#include "oracles.hpp"
#include "tnx/circuit.hpp"
#include "tnx/contract.hpp"
#include "tnx/dmrg.hpp"
#include "tnx/physics.hpp"

using namespace tnx;
using Eigen::MatrixXcd;
using Labels = std::vector<std::string>;

namespace {

MatrixXcd pauli(char c) {
  MatrixXcd m = MatrixXcd::Zero(2, 2);
  if (c == 'x') m << 0, 1, 1, 0;
  if (c == 'y') m << 0, cplx(0, -1), cplx(0, 1), 0;
  if (c == 'z') m << 1, 0, 0, -1;
  if (c == 'i') m << 1, 0, 0, 1;
  return m;
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int64_t i = 0; i < a.rows(); ++i)
    for (int64_t j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// Operator c acting on sites j and j+1 of an n-site chain.
MatrixXcd pair_op(int n, int j, char c) {
  MatrixXcd m = MatrixXcd::Identity(1, 1);
  for (int s = 0; s < n; ++s) m = kron(m, (s == j || s == j + 1) ? pauli(c) : pauli('i'));
  return m;
}

MatrixXcd xx_hamiltonian(int n) {
  MatrixXcd h = MatrixXcd::Zero(int64_t{1} << n, int64_t{1} << n);
  for (int j = 0; j + 1 < n; ++j) h += 0.25 * (pair_op(n, j, 'x') + pair_op(n, j, 'y'));
  return h;
}

MatrixXcd as_matrix(const UniTensor& t, int64_t rows) {
  auto v = oracle::values(t.contiguous().get_block());
  const int64_t cols = static_cast<int64_t>(v.size()) / rows;
  MatrixXcd m(rows, cols);
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) m(i, j) = v[static_cast<size_t>(i * cols + j)];
  return m;
}

// Contracts the whole MPO with its boundary vectors into (o0..o{N-1}; i0..i{N-1}).
UniTensor mpo_matrix(const apps::XXMpo& mpo) {
  const int64_t N = static_cast<int64_t>(mpo.W.size());
  std::vector<UniTensor> ts;
  Labels outs, ins;
  auto s = [](const char* p, int64_t j) { return p + std::to_string(j); };
  ts.push_back(mpo.left.relabel({s("w", 0)}));
  for (int64_t j = 0; j < N; ++j) {
    ts.push_back(mpo.W[static_cast<size_t>(j)].relabel({s("w", j), s("w", j + 1), s("o", j), s("i", j)}));
    outs.push_back(s("o", j));
    ins.push_back(s("i", j));
  }
  ts.push_back(mpo.right.relabel({s("w", N)}));
  UniTensor h = Contract(ts, "", false);
  Labels order = outs;
  order.insert(order.end(), ins.begin(), ins.end());
  return h.permute(order);
}

}  // namespace

TEST(XXMpo, MatchesKroneckerOracle) {
  for (int n : {2, 3, 4}) {
    UniTensor h = mpo_matrix(apps::build_xx_mpo(n));
    EXPECT_LE((as_matrix(h, int64_t{1} << n) - xx_hamiltonian(n)).norm(), 1e-14) << "N=" << n;
  }
}

TEST(XXMpo, SymmetricEqualsDense) {
  auto d = apps::build_xx_mpo(4, false), s = apps::build_xx_mpo(4, true);
  ASSERT_EQ(s.W.size(), 4u);
  for (size_t j = 0; j < 4; ++j) {
    EXPECT_TRUE(s.W[j].is_symmetric());
    EXPECT_LE((s.W[j].to_dense().permute(d.W[j].labels()) - d.W[j].astype(s.W[j].dtype())).Norm(), 1e-15);
  }
  EXPECT_LE((as_matrix(mpo_matrix(s).to_dense(), 16) - xx_hamiltonian(4)).norm(), 1e-14);
  EXPECT_THROW(apps::build_xx_mpo(1), std::invalid_argument);
}

TEST(RandomMps, BondDimensions) {
  auto m = apps::random_mps(6, 3, 1);
  ASSERT_EQ(m.size(), 6u);
  std::vector<int64_t> want{1, 2, 3, 3, 3, 2, 1};
  for (size_t j = 0; j < 6; ++j) {
    EXPECT_EQ(m[j].labels(), (Labels{"l", "p", "r"}));
    EXPECT_EQ(m[j].shape(), (Shape{want[j], 2, want[j + 1]}));
  }
}

TEST(ProductMps, ChargesAccumulate) {
  auto m = apps::product_mps({+1, -1, +1});
  ASSERT_EQ(m.size(), 3u);
  for (const auto& t : m) {
    EXPECT_TRUE(t.is_symmetric());
    EXPECT_EQ(t.Nblocks(), 1);
    EXPECT_NEAR(t.Norm(), 1.0, 1e-15);
  }
  EXPECT_EQ(m[0].bond("r").qn(0), (Qn{1}));
  EXPECT_EQ(m[1].bond("r").qn(0), (Qn{0}));
}

TEST(EffectiveHamiltonian, TwoSiteChainIsTheBondOperator) {
  for (bool sym : {false, true}) {
    auto mpo = apps::build_xx_mpo(2, sym);
    auto mps = sym ? apps::product_mps({+1, -1}) : apps::random_mps(2, 4, 3);
    UniTensor L = apps::left_boundary(mpo, mps[0]);
    UniTensor R = apps::right_boundary(mpo, mps[1]);
    UniTensor psi = Contract(mps[0].relabel({"p", "r"}, {"p1", "_m"}), mps[1].relabel({"l", "p"}, {"_m", "p2"}));
    apps::EffectiveHamiltonian H(L, mpo.W[0], mpo.W[1], R, psi);
    UniTensor dense_psi = psi.to_dense();
    MatrixXcd M = MatrixXcd::Zero(4, 4);
    for (int64_t k = 0; k < 4; ++k) {
      std::vector<int64_t> idx{0, k / 2, k % 2, 0};
      if (sym && !psi.elem_exists(idx)) continue;
      UniTensor e = psi.clone() * 0.0;
      e.set_elem(idx, 1.0);
      UniTensor out = H.matvec(e).to_dense();
      EXPECT_EQ(out.labels(), (Labels{"l", "p1", "p2", "r"}));
      for (int64_t r = 0; r < 4; ++r) M(r, k) = out.get_elem({0, r / 2, r % 2, 0}).to_complex();
    }
    MatrixXcd want = xx_hamiltonian(2);
    if (sym) {
      // only the Sz = 0 sector (states 1 and 2) is reachable
      EXPECT_LE((M.block(1, 1, 2, 2) - want.block(1, 1, 2, 2)).norm(), 1e-14);
    } else {
      EXPECT_LE((M - want).norm(), 1e-14);
      EXPECT_LE((M - M.adjoint()).norm(), 1e-14);
    }
  }
}

TEST(Dmrg, SmallChainsMatchExactDiagonalization) {
  for (int n : {4, 6}) {
    apps::DmrgConfig cfg;
    cfg.N = n;
    cfg.D = 16;
    cfg.sweeps = 4;
    double exact = oracle::xx_exact_energy(n);
    for (bool sym : {false, true}) {
      cfg.symmetric = sym;
      auto r = apps::dmrg_ground_state(cfg);
      EXPECT_NEAR(r.energy, exact, 1e-10) << "N=" << n << " symmetric=" << sym;
      EXPECT_EQ(r.sweep_energies.size(), 4u);
      EXPECT_EQ(r.mps.size(), static_cast<size_t>(n));
    }
  }
}

TEST(Dmrg, ConfigErrors) {
  apps::DmrgConfig cfg;
  cfg.N = 1;
  EXPECT_THROW(apps::dmrg_ground_state(cfg), std::invalid_argument);
  cfg.N = 4;
  cfg.D = 0;
  EXPECT_THROW(apps::dmrg_ground_state(cfg), std::invalid_argument);
  cfg.D = 4;
  cfg.sweeps = 0;
  EXPECT_THROW(apps::dmrg_ground_state(cfg), std::invalid_argument);
  cfg.sweeps = 1;
  cfg.N = 5;
  cfg.symmetric = true;
  EXPECT_THROW(apps::dmrg_ground_state(cfg), std::invalid_argument);
}

TEST(TrotterGate, MatchesSpectralOracleAndIsUnitary) {
  const double J = 0.7, hx = 0.4, hz = -1.3, dt = 0.05;
  struct Case {
    apps::GatePosition pos;
    double cl, cr;
  };
  for (auto c : {Case{apps::GatePosition::Bulk, 0.5, 0.5}, Case{apps::GatePosition::LeftEdge, 1.0, 0.5},
                 Case{apps::GatePosition::RightEdge, 0.5, 1.0}, Case{apps::GatePosition::Isolated, 1.0, 1.0}}) {
    UniTensor G = apps::build_trotter_gate(J, hx, hz, dt, c.pos);
    EXPECT_EQ(G.labels(), (Labels{"in_up", "in_bottom", "out_up", "out_bottom"}));
    EXPECT_EQ(G.rowrank(), 2);
    MatrixXcd h = J * kron(pauli('z'), pauli('z')) + c.cl * (hz * kron(pauli('z'), pauli('i')) + hx * kron(pauli('x'), pauli('i'))) +
                  c.cr * (hz * kron(pauli('i'), pauli('z')) + hx * kron(pauli('i'), pauli('x')));
    MatrixXcd g = as_matrix(G, 4);
    EXPECT_LE((g - MatrixXcd(oracle::unitary_4x4(h, dt))).norm(), 1e-13);
    EXPECT_LE((g.adjoint() * g - MatrixXcd::Identity(4, 4)).norm(), 1e-13);
  }
  EXPECT_THROW(apps::build_trotter_gate(1, 0, 0, 0.0, apps::GatePosition::Bulk), std::invalid_argument);
}

TEST(Circuit, NoFieldsKeepsZBasisState) {
  apps::CircuitConfig cfg;
  cfg.N = 5;
  cfg.hx = 0;
  cfg.hz = 0;
  cfg.steps = 6;
  cfg.pattern = "ddudd";
  auto r = apps::simulate_circuit(cfg);
  ASSERT_EQ(r.sz.size(), 7u);
  for (double s : r.sz) EXPECT_NEAR(s, 1.0, 1e-14);
  EXPECT_NEAR(r.times.back(), 0.6, 1e-14);
}

TEST(Circuit, NormConservedAndMatchesOracle) {
  apps::CircuitConfig cfg;
  cfg.N = 6;
  cfg.steps = 10;
  cfg.pattern = "uddduu";
  auto r = apps::simulate_circuit(cfg);
  for (double n : r.norms) EXPECT_NEAR(n, 1.0, 1e-12);
  auto want = oracle::circuit_sz(6, cfg.J, cfg.hx, cfg.hz, cfg.dt, 10, apps::parse_pattern(cfg.pattern));
  ASSERT_EQ(want.size(), r.sz.size());
  for (size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(r.sz[i], want[i], 1e-12);
}

TEST(Circuit, ConfigErrors) {
  apps::CircuitConfig cfg;
  cfg.N = 1;
  cfg.pattern = "u";
  EXPECT_THROW(apps::simulate_circuit(cfg), std::invalid_argument);
  cfg.N = 3;
  cfg.pattern = "uu";
  EXPECT_THROW(apps::simulate_circuit(cfg), std::invalid_argument);
  cfg.pattern = "uxu";
  EXPECT_THROW(apps::simulate_circuit(cfg), std::invalid_argument);
  cfg.pattern = "uuu";
  cfg.steps = -1;
  EXPECT_THROW(apps::simulate_circuit(cfg), std::invalid_argument);
  EXPECT_EQ(apps::parse_pattern("uD01"), (std::vector<int>{0, 1, 0, 1}));
}
