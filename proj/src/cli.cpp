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

#include "tnx/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "tnx/circuit.hpp"
#include "tnx/contract.hpp"
#include "tnx/dmrg.hpp"
#include "tnx/linalg.hpp"
#include "tnx/network.hpp"
#include "tnx/serialize.hpp"

namespace tnx::cli {

namespace {

// Usage errors are everything the user can fix by changing arguments or files.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Network read_net(const std::string& path) {
  try {
    return Network::from_file(path);
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string default_pattern(int64_t n) {
  if (n < 5) {
    std::string p;
    for (int64_t i = 0; i < n; ++i) p += i % 2 ? 'd' : 'u';
    return p;
  }
  return "uu" + std::string(static_cast<size_t>(n - 4), 'd') + "uu";
}

// Opens path for writing; "-" means the given stream.
std::ostream& sink(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path == "-") return fallback;
  file.open(path);
  if (!file) throw UsageError("cannot open " + path + " for writing");
  return file;
}

struct ContractArgs {
  std::string net;
  std::vector<std::string> tensors;
  bool optimal = false;
  bool print_order = false;
  std::string out;
};

void do_contract(const ContractArgs& a, std::ostream& out) {
  Network net = read_net(a.net);
  for (const auto& arg : a.tensors) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--tensor expects SLOT=path[:l1,l2,...], got " + arg);
    const std::string slot = arg.substr(0, eq);
    std::string path = arg.substr(eq + 1);
    std::vector<std::string> map;
    const auto colon = path.rfind(':');
    if (colon != std::string::npos) {
      map = split(path.substr(colon + 1), ',');
      path = path.substr(0, colon);
    }
    UniTensor t;
    try {
      t = load_file(path);
    } catch (const std::exception& e) {
      throw UsageError(path + ": " + e.what());
    }
    net.put_tensor(slot, t, map);
  }
  for (const auto& s : net.slot_names())
    if (!net.is_bound(s)) throw UsageError("slot " + s + " has no tensor");
  if (a.optimal && net.slot_names().size() > 1) {
    std::vector<std::vector<std::string>> labels;
    for (const auto& s : net.slot_names()) labels.push_back(net.slot_labels(s));
    auto best = find_optimal_order(net.slot_names(), labels, net.bound_dims());
    net.set_order(false, best.tree.str());
  }
  if (a.print_order) out << "order: " << net.get_order() << "\n";
  UniTensor r = net.launch();
  out << "labels: [" << join(r.labels(), ", ") << "]\n";
  std::vector<std::string> dims;
  for (auto d : r.shape()) dims.push_back(std::to_string(d));
  out << "shape: (" << join(dims, ", ") << ")\n";
  out << "rowrank: " << r.rowrank() << "\n";
  out << "norm: " << std::setprecision(12) << r.Norm() << "\n";
  if (!a.out.empty()) {
    save_file(r, a.out);
    out << "wrote " << a.out << "\n";
  }
}

struct DmrgArgs {
  apps::DmrgConfig cfg;
  std::string json;
};

void do_dmrg(const DmrgArgs& a, std::ostream& out) {
  apps::DmrgResult r;
  try {
    r = apps::dmrg_ground_state(a.cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << std::setprecision(14);
  for (size_t s = 0; s < r.sweep_energies.size(); ++s) out << "sweep " << s + 1 << "  E = " << r.sweep_energies[s] << "\n";
  out << "energy " << r.energy << "\n";
  if (!a.json.empty()) {
    nlohmann::json j;
    j["sweeps"] = r.sweep_energies;
    j["energy"] = r.energy;
    std::ofstream f;
    sink(a.json, f, out) << j.dump(2) << "\n";
  }
}

struct QsimArgs {
  apps::CircuitConfig cfg;
  bool pattern_given = false;
  std::string csv = "-";
};

void do_qsim(QsimArgs a, std::ostream& out) {
  if (!a.pattern_given) a.cfg.pattern = default_pattern(a.cfg.N);
  apps::CircuitResult r;
  try {
    r = apps::simulate_circuit(a.cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::ofstream f;
  std::ostream& os = sink(a.csv, f, out);
  os << "t,sz\n" << std::setprecision(15);
  for (size_t i = 0; i < r.times.size(); ++i) os << r.times[i] << "," << r.sz[i] << "\n";
}

struct NetoptArgs {
  std::string net;
  std::string dims;
};

void do_netopt(const NetoptArgs& a, std::ostream& out) {
  Network net = read_net(a.net);
  CostModel dims;
  for (const auto& kv : split(a.dims, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--dims expects label=dim pairs, got " + kv);
    try {
      dims[kv.substr(0, eq)] = std::stoll(kv.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw UsageError("bad dimension in " + kv);
    }
  }
  std::vector<std::vector<std::string>> labels;
  for (const auto& s : net.slot_names()) {
    labels.push_back(net.slot_labels(s));
    for (const auto& l : labels.back())
      if (!dims.count(l)) throw UsageError("no dimension given for label " + l);
  }
  if (net.slot_names().size() == 1) {
    out << "order: " << net.slot_names()[0] << "\ncost: 0\n";
    return;
  }
  auto best = find_optimal_order(net.slot_names(), labels, dims);
  out << "order: " << best.tree.str() << "\n";
  out << "cost: " << std::setprecision(17) << best.cost << "\n";
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tnx: labeled tensor networks, DMRG and circuit simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  bool bench = false;
  app.add_flag("--bench", bench, "print wall time of the command to stderr");

  ContractArgs ca;
  auto* c = app.add_subcommand("contract", "launch a .net file on serialized tensors");
  c->add_option("net", ca.net, "network file")->required()->check(CLI::ExistingFile);
  c->add_option("--tensor", ca.tensors, "SLOT=path[:l1,l2,...]");
  c->add_flag("--optimal", ca.optimal, "search for the cheapest contraction order");
  c->add_flag("--print-order", ca.print_order, "print the order used");
  c->add_option("--out", ca.out, "write the result tensor here");

  DmrgArgs da;
  auto* d = app.add_subcommand("dmrg", "two-site DMRG ground state of the open XX chain");
  d->add_option("--n", da.cfg.N, "number of sites (even, >= 4)")->capture_default_str();
  d->add_option("--chi", da.cfg.D, "maximal bond dimension")->capture_default_str();
  d->add_option("--sweeps", da.cfg.sweeps, "number of sweeps")->capture_default_str();
  d->add_option("--tol", da.cfg.lanczos_tol, "Lanczos tolerance")->capture_default_str();
  d->add_option("--seed", da.cfg.seed, "seed of the random start state")->capture_default_str();
  d->add_flag("--symmetric", da.cfg.symmetric, "use U(1) block-sparse tensors");
  d->add_option("--json", da.json, "write {\"sweeps\":[...],\"energy\":E} here (- for stdout)");

  QsimArgs qa;
  auto* q = app.add_subcommand("qsim", "Trotterized statevector evolution of the tilted Ising chain");
  q->add_option("--n", qa.cfg.N, "number of qubits")->capture_default_str();
  q->add_option("--j", qa.cfg.J, "ZZ coupling")->capture_default_str();
  q->add_option("--hx", qa.cfg.hx, "transverse field")->capture_default_str();
  q->add_option("--hz", qa.cfg.hz, "longitudinal field")->capture_default_str();
  q->add_option("--dt", qa.cfg.dt, "time step")->capture_default_str();
  q->add_option("--steps", qa.cfg.steps, "number of steps")->capture_default_str();
  q->add_option("--pattern", qa.cfg.pattern, "initial product state, one of u/d per qubit");
  q->add_option("--csv", qa.csv, "write t,sz rows here (- for stdout)")->capture_default_str();

  NetoptArgs na;
  auto* n = app.add_subcommand("netopt", "cheapest contraction order of a .net file");
  n->add_option("net", na.net, "network file")->required()->check(CLI::ExistingFile);
  n->add_option("--dims", na.dims, "label=dim,...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  qa.pattern_given = q->count("--pattern") > 0;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*c) do_contract(ca, out);
    if (*d) do_dmrg(da, out);
    if (*q) do_qsim(qa, out);
    if (*n) do_netopt(na, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const linalg::ConvergenceError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kNumeric;
  }
  if (bench)
    err << "wall time: " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
  return kOk;
}

}  // namespace tnx::cli
