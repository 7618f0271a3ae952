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
#include <vector>

#include "tnx/linalg.hpp"
#include "tnx/unitensor.hpp"

namespace tnx::apps {

/// Physical dimension and MPO bond dimension of the spin-1/2 XX chain.
inline constexpr int64_t kPhysDim = 2;
inline constexpr int64_t kMpoDim = 4;

/// MPO of H = sum_j (Sx_j Sx_j+1 + Sy_j Sy_j+1).
///
/// Each W has labels (wl, wr, po, pi) with element <po|op|pi>. The MPO states
/// are 0 = term finished, 1 = term not started, 2 = S+ placed, 3 = S- placed.
/// left selects state 1 and right selects state 0. With symmetric=true the
/// bonds carry U(1) charges 2 Sz: physical sectors +1 (up), -1 (down) and
/// MPO sectors 0 (states 0, 1), +2 (state 2), -2 (state 3); wl and po are IN.
struct XXMpo {
  std::vector<UniTensor> W;
  UniTensor left;   ///< label "w", one bond matching wl
  UniTensor right;  ///< label "w", one bond matching wr
};

XXMpo build_xx_mpo(int64_t N, bool symmetric = false);

/// MPS tensors carry labels (l, p, r); for symmetric tensors l and p are IN, r OUT.
/// Random dense MPS with bond dimensions min(2^j, D, 2^(N-j)).
std::vector<UniTensor> random_mps(int64_t N, int64_t D, uint64_t seed);
/// U(1) product state with the given pattern of 2 Sz values (+1 or -1).
std::vector<UniTensor> product_mps(const std::vector<int>& spins);

/// Environments: L has labels (out, w, in), R has labels (in, w, out); "in"
/// faces the ket, "out" the bra.
UniTensor left_boundary(const XXMpo& mpo, const UniTensor& first_site);
UniTensor right_boundary(const XXMpo& mpo, const UniTensor& last_site);
UniTensor grow_left(const UniTensor& L, const UniTensor& A, const UniTensor& W);
UniTensor grow_right(const UniTensor& R, const UniTensor& A, const UniTensor& W);

/// Two-site effective Hamiltonian acting on psi(l, p1, p2, r).
class EffectiveHamiltonian : public linalg::LinOp {
 public:
  EffectiveHamiltonian(const UniTensor& L, const UniTensor& W1, const UniTensor& W2, const UniTensor& R,
                       const UniTensor& psi_like);
  UniTensor matvec(const UniTensor& psi) const override;

 private:
  UniTensor L_, W1_, W2_, R_;
};

struct DmrgConfig {
  int64_t N = 20;
  int64_t D = 32;
  int64_t sweeps = 6;
  double lanczos_tol = 1e-10;
  int64_t lanczos_max_iter = -1;
  bool symmetric = false;
  uint64_t seed = 1;
};

struct DmrgResult {
  double energy = 0.0;
  std::vector<UniTensor> mps;
  std::vector<double> sweep_energies;
};

/// Two-site DMRG for the XX chain. A dense run starts from random_mps; a
/// symmetric run starts from the Neel state in the total Sz = 0 sector.
DmrgResult dmrg_ground_state(const DmrgConfig& cfg);

}  // namespace tnx::apps
