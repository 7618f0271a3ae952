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

#include "tnx/contract.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bitset>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <unordered_map>

namespace tnx {

// ---- ContractionTree ----

ContractionTree ContractionTree::leaf(const std::string& name) {
  if (!is_valid_name(name)) throw std::invalid_argument("invalid tensor name '" + name + "'");
  auto n = std::make_shared<Node>();
  n->name = name;
  return ContractionTree(n);
}

ContractionTree ContractionTree::join(const ContractionTree& l, const ContractionTree& r) {
  if (l.empty() || r.empty()) throw std::invalid_argument("cannot join an empty tree");
  auto n = std::make_shared<Node>();
  n->left = l.node_;
  n->right = r.node_;
  return ContractionTree(n);
}

bool is_valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '*' ||
              c == '\'' || c == '+' || c == '-';
    if (!ok) return false;
  }
  return true;
}

namespace {

struct TreeParser {
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("malformed order string '" + s + "' at position " + std::to_string(pos) + ": " + what);
  }
  ContractionTree tree() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    if (s[pos] == '(') {
      ++pos;
      ContractionTree l = tree();
      skip();
      if (pos >= s.size() || s[pos] != ',') fail("expected ','");
      ++pos;
      ContractionTree r = tree();
      skip();
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
      return ContractionTree::join(l, r);
    }
    size_t start = pos;
    while (pos < s.size() && s[pos] != ',' && s[pos] != '(' && s[pos] != ')' &&
           !std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    std::string name = s.substr(start, pos - start);
    if (!is_valid_name(name)) fail("invalid name '" + name + "'");
    return ContractionTree::leaf(name);
  }
};

}  // namespace

ContractionTree ContractionTree::parse(const std::string& text) {
  TreeParser p{text};
  ContractionTree t = p.tree();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  auto names = t.leaves();
  std::set<std::string> uniq(names.begin(), names.end());
  if (uniq.size() != names.size()) throw std::invalid_argument("order string '" + text + "' repeats a name");
  return t;
}

std::vector<std::string> ContractionTree::leaves() const {
  std::vector<std::string> out;
  std::function<void(const Node*)> rec = [&](const Node* n) {
    if (!n->left) {
      out.push_back(n->name);
      return;
    }
    rec(n->left.get());
    rec(n->right.get());
  };
  if (node_) rec(node_.get());
  return out;
}

std::string ContractionTree::str() const {
  if (!node_) return "";
  if (is_leaf()) return node_->name;
  return "(" + left().str() + "," + right().str() + ")";
}

// ---- order search ----

namespace {

constexpr size_t kMaxLabels = 256;
using LabelSet = std::bitset<kMaxLabels>;

struct Network {
  size_t n = 0;
  std::vector<double> dim;        // per label id
  std::vector<LabelSet> tensor;   // labels per tensor
  std::vector<uint64_t> holders;  // tensors carrying each label (bitmask)
};

Network build_network(const std::vector<std::string>& names, const std::vector<std::vector<std::string>>& labels,
                      const CostModel& dims) {
  if (names.empty()) throw std::invalid_argument("order search needs at least one tensor");
  if (names.size() != labels.size()) throw std::invalid_argument("one label list per tensor required");
  if (names.size() > 62) throw std::invalid_argument("too many tensors for order search");
  Network net;
  net.n = names.size();
  std::map<std::string, size_t> id;
  net.tensor.resize(net.n);
  for (size_t t = 0; t < net.n; ++t) {
    for (const auto& l : labels[t]) {
      auto it = id.find(l);
      if (it == id.end()) {
        if (id.size() >= kMaxLabels) throw std::invalid_argument("too many distinct labels for order search");
        auto d = dims.find(l);
        if (d == dims.end()) throw std::invalid_argument("no dimension given for label '" + l + "'");
        it = id.emplace(l, id.size()).first;
        net.dim.push_back(static_cast<double>(d->second));
        net.holders.push_back(0);
      }
      if (net.tensor[t].test(it->second)) throw std::invalid_argument("label '" + l + "' repeated on one tensor");
      net.tensor[t].set(it->second);
      net.holders[it->second] |= uint64_t{1} << t;
    }
  }
  for (size_t l = 0; l < net.holders.size(); ++l)
    if (std::popcount(net.holders[l]) > 2)
      throw std::invalid_argument("a label appears on more than two tensors (hyperedge)");
  return net;
}

// Labels of subset S that are still open: shared with the outside or never contracted.
LabelSet open_labels(const Network& net, uint64_t S) {
  LabelSet all;
  for (size_t t = 0; t < net.n; ++t)
    if (S >> t & 1) all |= net.tensor[t];
  LabelSet out;
  for (size_t l = 0; l < net.holders.size(); ++l) {
    if (!all.test(l)) continue;
    uint64_t h = net.holders[l];
    if ((h & ~S) != 0 || std::popcount(h) == 1) out.set(l);
  }
  return out;
}

double set_product(const Network& net, const LabelSet& s) {
  double p = 1.0;
  for (size_t l = 0; l < net.holders.size(); ++l)
    if (s.test(l)) p *= net.dim[l];
  return p;
}

}  // namespace

OrderResult find_optimal_order(const std::vector<std::string>& names,
                               const std::vector<std::vector<std::string>>& labels, const CostModel& dims) {
  Network net = build_network(names, labels, dims);
  const size_t n = net.n;
  if (n == 1) return {ContractionTree::leaf(names[0]), 0.0};
  const uint64_t full = (uint64_t{1} << n) - 1;
  if (n > 20) throw std::invalid_argument("exhaustive order search is limited to 20 tensors");

  std::vector<LabelSet> open(full + 1);
  for (uint64_t S = 1; S <= full; ++S) open[S] = open_labels(net, S);

  constexpr double kUnknown = std::numeric_limits<double>::infinity();
  std::vector<double> cost(full + 1);
  std::vector<std::string> text(full + 1);
  std::vector<uint64_t> split(full + 1);
  std::vector<std::vector<uint64_t>> by_size(n + 1);
  for (uint64_t S = 1; S <= full; ++S) by_size[std::popcount(S)].push_back(S);

  double mu = 1.0;
  for (size_t t = 0; t < n; ++t) mu = std::max(mu, set_product(net, net.tensor[t]));
  while (true) {
    std::fill(cost.begin(), cost.end(), kUnknown);
    for (size_t t = 0; t < n; ++t) {
      cost[uint64_t{1} << t] = 0.0;
      text[uint64_t{1} << t] = names[t];
    }
    double mu_next = kUnknown;
    for (size_t c = 2; c <= n; ++c) {
      for (uint64_t S : by_size[c]) {
        // Enumerate splits S = A | B with A holding the lowest tensor of S.
        const uint64_t low = S & (~S + 1);
        const uint64_t rest = S ^ low;
        for (uint64_t sub = rest;; sub = (sub - 1) & rest) {
          const uint64_t A = low | sub;
          const uint64_t B = S ^ A;
          if (B != 0 && cost[A] != kUnknown && cost[B] != kUnknown) {
            const double c2 = cost[A] + cost[B] + set_product(net, open[A] | open[B]);
            if (c2 > mu) {
              mu_next = std::min(mu_next, c2);
            } else if (c2 <= cost[S]) {
              const std::string& ta = text[A];
              const std::string& tb = text[B];
              std::string cand = ta < tb ? "(" + ta + "," + tb + ")" : "(" + tb + "," + ta + ")";
              if (c2 < cost[S] || cand < text[S]) {
                cost[S] = c2;
                text[S] = std::move(cand);
                split[S] = A;
              }
            }
          }
          if (sub == 0) break;
        }
      }
    }
    if (cost[full] != kUnknown) break;
    if (mu_next == kUnknown) throw std::logic_error("order search failed to grow the cost cap");
    mu = std::max(2.0 * mu, mu_next);
  }
  return {ContractionTree::parse(text[full]), cost[full]};
}

double tree_cost(const ContractionTree& tree, const std::vector<std::string>& names,
                 const std::vector<std::vector<std::string>>& labels, const CostModel& dims) {
  Network net = build_network(names, labels, dims);
  std::map<std::string, size_t> pos;
  for (size_t t = 0; t < names.size(); ++t) pos[names[t]] = t;
  auto leaves = tree.leaves();
  if (leaves.size() != names.size()) throw std::invalid_argument("tree does not cover every tensor");
  double total = 0.0;
  std::function<uint64_t(const ContractionTree&)> rec = [&](const ContractionTree& t) -> uint64_t {
    if (t.is_leaf()) {
      auto it = pos.find(t.name());
      if (it == pos.end()) throw std::invalid_argument("tree names unknown tensor '" + t.name() + "'");
      return uint64_t{1} << it->second;
    }
    uint64_t a = rec(t.left()), b = rec(t.right());
    total += set_product(net, open_labels(net, a) | open_labels(net, b));
    return a | b;
  };
  rec(tree);
  return total;
}

// ---- pairwise contraction ----

namespace {

template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// C (m x n) += A (m x k) * B (k x n), all row-major contiguous buffers.
template <class T>
void gemm_acc(const T* a, const T* b, T* c, int64_t m, int64_t k, int64_t n) {
  Eigen::Map<const RowMat<T>> A(a, m, k);
  Eigen::Map<const RowMat<T>> B(b, k, n);
  Eigen::Map<RowMat<T>> C(c, m, n);
  C.noalias() += A * B;
}

void check_pair_bonds(const Bond& x, const Bond& y, const std::string& label) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("cannot contract label '" + label + "': dimension " + std::to_string(x.dim()) +
                                " vs " + std::to_string(y.dim()));
  const bool xr = x.type() == BondType::REGULAR, yr = y.type() == BondType::REGULAR;
  if (xr != yr)
    throw std::invalid_argument("cannot contract label '" + label + "': REGULAR bond against a directed bond");
  if (!xr && x.type() == y.type())
    throw std::invalid_argument("cannot contract label '" + label + "': both bonds point the same way");
  if (x.is_symmetric() || y.is_symmetric()) {
    if (x.syms() != y.syms()) throw std::invalid_argument("cannot contract label '" + label + "': symmetry mismatch");
    if (x.sectors() != y.sectors())
      throw std::invalid_argument("cannot contract label '" + label + "': quantum numbers or sector sizes differ");
  }
}

struct PairPlan {
  std::vector<int64_t> sa, sb;  // shared positions in a and b (a's order)
  std::vector<int64_t> fa, fb;  // free positions
  std::vector<Bond> bonds;
  std::vector<std::string> labels;
};

PairPlan plan_pair(const UniTensor& a, const UniTensor& b) {
  if (a.is_symmetric() != b.is_symmetric())
    throw std::invalid_argument("cannot contract a symmetric tensor with a dense one");
  if (a.is_symmetric() && b.is_symmetric() && a.rank() > 0 && b.rank() > 0 && a.syms() != b.syms())
    throw std::invalid_argument("cannot contract tensors with different symmetries");
  PairPlan p;
  for (int64_t i = 0; i < a.rank(); ++i) {
    const std::string& l = a.labels()[static_cast<size_t>(i)];
    int64_t j = b.label_index(l);
    if (j >= 0) {
      check_pair_bonds(a.bond(i), b.bond(j), l);
      p.sa.push_back(i);
      p.sb.push_back(j);
    } else {
      p.fa.push_back(i);
    }
  }
  for (int64_t j = 0; j < b.rank(); ++j)
    if (a.label_index(b.labels()[static_cast<size_t>(j)]) < 0) p.fb.push_back(j);
  for (auto i : p.fa) {
    p.bonds.push_back(a.bond(i));
    p.labels.push_back(a.labels()[static_cast<size_t>(i)]);
  }
  for (auto j : p.fb) {
    p.bonds.push_back(b.bond(j));
    p.labels.push_back(b.labels()[static_cast<size_t>(j)]);
  }
  return p;
}

std::vector<int64_t> concat(const std::vector<int64_t>& x, const std::vector<int64_t>& y) {
  std::vector<int64_t> r = x;
  r.insert(r.end(), y.begin(), y.end());
  return r;
}

int64_t prod_dims(const Shape& s, const std::vector<int64_t>& axes) {
  int64_t p = 1;
  for (auto i : axes) p *= s[static_cast<size_t>(i)];
  return p;
}

template <class T>
void contract_dense_into(const DenseTensor& a, const DenseTensor& b, const PairPlan& p, DenseTensor& out) {
  DenseTensor A = a.permute(concat(p.fa, p.sa)).contiguous().astype(dtype_of<T>());
  DenseTensor B = b.permute(concat(p.sb, p.fb)).contiguous().astype(dtype_of<T>());
  const int64_t m = prod_dims(a.shape(), p.fa), k = prod_dims(a.shape(), p.sa), n = prod_dims(b.shape(), p.fb);
  gemm_acc<T>(A.data<T>(), B.data<T>(), out.data<T>(), m, k, n);
}

template <class T>
UniTensor contract_impl(const UniTensor& a, const UniTensor& b, const PairPlan& p) {
  const DType dt = dtype_of<T>();
  const int64_t rowrank = static_cast<int64_t>(p.fa.size());
  if (!a.is_symmetric()) {
    Shape s;
    for (const auto& bd : p.bonds) s.push_back(bd.dim());
    DenseTensor out(s, dt);
    contract_dense_into<T>(a.block(0), b.block(0), p, out);
    return UniTensor::from_blocks(p.bonds, p.labels, rowrank, {out});
  }
  // Output blocks: zero-filled and keyed by their sector tuple.
  std::vector<std::vector<int64_t>> out_qi = enumerate_blocks(p.bonds);
  std::vector<DenseTensor> out_blocks;
  std::map<std::vector<int64_t>, size_t> out_index;
  for (size_t k = 0; k < out_qi.size(); ++k) {
    Shape s;
    for (size_t i = 0; i < p.bonds.size(); ++i) s.push_back(p.bonds[i].deg(static_cast<size_t>(out_qi[k][i])));
    out_blocks.emplace_back(s, dt);
    out_index.emplace(out_qi[k], k);
  }
  // Group b's blocks by their sectors on the contracted bonds.
  std::map<std::vector<int64_t>, std::vector<int64_t>> b_by_key;
  for (int64_t k = 0; k < b.Nblocks(); ++k) {
    const auto& q = b.qn_indices(k);
    std::vector<int64_t> key;
    for (auto j : p.sb) key.push_back(q[static_cast<size_t>(j)]);
    b_by_key[key].push_back(k);
  }
  // Fixed accumulation order: a's blocks outer, b's blocks inner.
  for (int64_t ka = 0; ka < a.Nblocks(); ++ka) {
    const auto& qa = a.qn_indices(ka);
    std::vector<int64_t> key;
    for (auto i : p.sa) key.push_back(qa[static_cast<size_t>(i)]);
    auto it = b_by_key.find(key);
    if (it == b_by_key.end()) continue;
    for (int64_t kb : it->second) {
      const auto& qb = b.qn_indices(kb);
      std::vector<int64_t> oq;
      for (auto i : p.fa) oq.push_back(qa[static_cast<size_t>(i)]);
      for (auto j : p.fb) oq.push_back(qb[static_cast<size_t>(j)]);
      auto ot = out_index.find(oq);
      if (ot == out_index.end()) throw std::logic_error("block pair produced a non-zero-flux output");
      contract_dense_into<T>(a.block(ka), b.block(kb), p, out_blocks[ot->second]);
    }
  }
  return UniTensor::from_blocks(p.bonds, p.labels, rowrank, std::move(out_blocks), std::move(out_qi));
}

}  // namespace

UniTensor Contract(const UniTensor& a, const UniTensor& b) {
  PairPlan p = plan_pair(a, b);
  if (numeric_type(promote(a.dtype(), b.dtype())) == DType::Complex128) return contract_impl<cplx>(a, b, p);
  return contract_impl<double>(a, b, p);
}

// ---- multi-tensor contraction ----

namespace {

UniTensor run_tree(const ContractionTree& t, const std::map<std::string, const UniTensor*>& by_name) {
  if (t.is_leaf()) {
    auto it = by_name.find(t.name());
    if (it == by_name.end()) throw std::invalid_argument("order names unknown tensor '" + t.name() + "'");
    return *it->second;
  }
  return Contract(run_tree(t.left(), by_name), run_tree(t.right(), by_name));
}

}  // namespace

UniTensor Contract(const std::vector<UniTensor>& tensors, const std::string& order, bool optimal) {
  if (tensors.empty()) throw std::invalid_argument("Contract needs at least one tensor");
  std::map<std::string, int> count;
  for (const auto& t : tensors)
    for (const auto& l : t.labels())
      if (++count[l] > 2) throw std::invalid_argument("label '" + l + "' appears on more than two tensors");
  if (tensors.size() == 1) return tensors[0].clone();
  const bool by_name = !order.empty() || optimal;
  std::map<std::string, const UniTensor*> names;
  if (by_name) {
    for (const auto& t : tensors) {
      if (t.name().empty())
        throw std::invalid_argument("every tensor needs a name when an order is given or searched");
      if (!names.emplace(t.name(), &t).second) throw std::invalid_argument("duplicate tensor name '" + t.name() + "'");
    }
  }
  ContractionTree tree;
  if (!order.empty()) {
    tree = ContractionTree::parse(order);
    auto leaves = tree.leaves();
    std::set<std::string> ls(leaves.begin(), leaves.end());
    if (ls.size() != names.size()) throw std::invalid_argument("order does not cover every tensor exactly once");
    for (const auto& [n, _] : names)
      if (!ls.count(n)) throw std::invalid_argument("order is missing tensor '" + n + "'");
  } else if (optimal) {
    std::vector<std::string> nm;
    std::vector<std::vector<std::string>> lb;
    CostModel dims;
    for (const auto& t : tensors) {
      nm.push_back(t.name());
      lb.push_back(t.labels());
      for (int64_t i = 0; i < t.rank(); ++i) {
        auto [it, fresh] = dims.emplace(t.labels()[static_cast<size_t>(i)], t.bond(i).dim());
        if (!fresh && it->second != t.bond(i).dim())
          throw std::invalid_argument("label '" + it->first + "' has inconsistent dimensions");
      }
    }
    tree = find_optimal_order(nm, lb, dims).tree;
  } else {
    UniTensor acc = tensors[0];
    for (size_t i = 1; i < tensors.size(); ++i) acc = Contract(acc, tensors[i]);
    return acc;
  }
  return run_tree(tree, names);
}

}  // namespace tnx
