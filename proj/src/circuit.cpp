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

#include "tnx/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "tnx/contract.hpp"
#include "tnx/linalg.hpp"
#include "tnx/physics.hpp"

namespace tnx::apps {

UniTensor build_trotter_gate(double J, double hx, double hz, double dt, GatePosition pos) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  const bool full_left = pos == GatePosition::LeftEdge || pos == GatePosition::Isolated;
  const bool full_right = pos == GatePosition::RightEdge || pos == GatePosition::Isolated;
  const double cl = full_left ? 1.0 : 0.5, cr = full_right ? 1.0 : 0.5;
  const DenseTensor X = physics::pauli("x"), Z = physics::pauli("z"), I = physics::pauli("i");
  DenseTensor h = J * Kron(Z, Z) + (cl * hz) * Kron(Z, I) + (cr * hz) * Kron(I, Z) + (cl * hx) * Kron(X, I) +
                  (cr * hx) * Kron(I, X);
  h.reshape_({2, 2, 2, 2});
  UniTensor H(h, 2, {"in_up", "in_bottom", "out_up", "out_bottom"});
  return linalg::ExpM(H, cplx(0.0, -dt), 0.0);
}

std::vector<int> parse_pattern(const std::string& pattern) {
  std::vector<int> out;
  for (char c : pattern) {
    if (c == 'u' || c == 'U' || c == '0')
      out.push_back(0);
    else if (c == 'd' || c == 'D' || c == '1')
      out.push_back(1);
    else
      throw std::invalid_argument(std::string("pattern character '") + c + "' is not one of u, d, 0, 1");
  }
  return out;
}

CircuitResult simulate_circuit(const CircuitConfig& cfg) {
  const int64_t N = cfg.N;
  if (N < 2) throw std::invalid_argument("the circuit needs at least two qubits");
  if (N > 24) throw std::invalid_argument("statevector simulation is limited to 24 qubits");
  if (!(cfg.dt > 0)) throw std::invalid_argument("dt must be positive");
  if (cfg.steps < 0) throw std::invalid_argument("steps must be non-negative");
  const auto spins = parse_pattern(cfg.pattern);
  if (static_cast<int64_t>(spins.size()) != N)
    throw std::invalid_argument("pattern has " + std::to_string(spins.size()) + " qubits, expected " +
                                std::to_string(N));

  std::vector<std::string> q;
  for (int64_t i = 0; i < N; ++i) q.push_back("q" + std::to_string(i));
  DenseTensor init(Shape(static_cast<size_t>(N), 2), DType::Complex128);
  init.set(std::vector<int64_t>(spins.begin(), spins.end()), cplx(1.0, 0.0));
  UniTensor psi(init, 0, q);

  std::vector<UniTensor> gates;
  for (int64_t b = 0; b + 1 < N; ++b) {
    GatePosition pos = N == 2        ? GatePosition::Isolated
                       : b == 0      ? GatePosition::LeftEdge
                       : b == N - 2  ? GatePosition::RightEdge
                                     : GatePosition::Bulk;
    gates.push_back(build_trotter_gate(cfg.J, cfg.hx, cfg.hz, cfg.dt, pos));
  }
  auto apply = [&](int64_t b) {
    const auto& a = q[static_cast<size_t>(b)];
    const auto& c = q[static_cast<size_t>(b + 1)];
    UniTensor G = gates[static_cast<size_t>(b)].relabel({"_n0", "_n1", a, c});
    psi = Contract(G, psi).relabel({"_n0", "_n1"}, {a, c}).permute(q, 0);
  };
  const int64_t center = (N + 1) / 2 - 1;
  CircuitResult res;
  auto measure = [&](double t) {
    const auto amp = psi.block(0).contiguous().to_vector<cplx>();
    double sz = 0.0, nrm = 0.0;
    const int64_t shift = N - 1 - center;
    for (size_t s = 0; s < amp.size(); ++s) {
      const double p = std::norm(amp[s]);
      nrm += p;
      sz += ((s >> shift) & 1) ? -p : p;
    }
    res.times.push_back(t);
    res.sz.push_back(sz);
    res.norms.push_back(std::sqrt(nrm));
  };
  measure(0.0);
  for (int64_t s = 1; s <= cfg.steps; ++s) {
    for (int64_t b = 0; b + 1 < N; b += 2) apply(b);
    for (int64_t b = 1; b + 1 < N; b += 2) apply(b);
    measure(static_cast<double>(s) * cfg.dt);
  }
  return res;
}

}  // namespace tnx::apps
