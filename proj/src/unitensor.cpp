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

#include "tnx/unitensor.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace tnx {

// ---- ElementProxy ----

Scalar ElementProxy::value() const {
  if (!exists()) throw std::out_of_range("element is not stored: it lies outside every symmetry-allowed block");
  return block_t_.get(idx_);
}

void ElementProxy::set(const Scalar& v) {
  if (!exists()) throw std::out_of_range("element is not stored: it lies outside every symmetry-allowed block");
  block_t_.set(idx_, v);
}

// ---- helpers ----

Qn flux_contribution(const Bond& b, size_t sector) {
  const Qn& q = b.qn(sector);
  return b.type() == BondType::OUT ? qn_reverse(b.syms(), q) : q;
}

std::vector<std::vector<int64_t>> enumerate_blocks(const std::vector<Bond>& bonds) {
  std::vector<std::vector<int64_t>> out;
  if (bonds.empty()) {
    out.push_back({});
    return out;
  }
  const auto& syms = bonds[0].syms();
  const size_t r = bonds.size();
  // Per-bond contributions, precomputed.
  std::vector<std::vector<Qn>> contrib(r);
  for (size_t i = 0; i < r; ++i)
    for (size_t s = 0; s < bonds[i].num_sectors(); ++s) contrib[i].push_back(flux_contribution(bonds[i], s));
  // The last bond is resolved by lookup: it must contribute reverse(partial flux).
  std::map<Qn, int64_t> last;
  for (size_t s = 0; s < contrib[r - 1].size(); ++s) last[contrib[r - 1][s]] = static_cast<int64_t>(s);

  std::vector<int64_t> idx(r, 0);
  std::vector<Qn> partial(r);  // partial[i] = flux of bonds 0..i-1
  partial[0] = qn_identity(syms);
  // Iterative odometer over the first r-1 bonds.
  size_t depth = 0;
  if (r == 1) {
    auto it = last.find(qn_reverse(syms, partial[0]));
    if (it != last.end()) out.push_back({it->second});
    return out;
  }
  while (true) {
    if (idx[depth] < static_cast<int64_t>(contrib[depth].size())) {
      Qn next = qn_combine(syms, partial[depth], contrib[depth][idx[depth]]);
      if (depth + 2 == r) {
        auto it = last.find(qn_reverse(syms, next));
        if (it != last.end()) {
          std::vector<int64_t> t(idx.begin(), idx.end());
          t[r - 1] = it->second;
          out.push_back(std::move(t));
        }
        idx[depth]++;
      } else {
        partial[depth + 1] = std::move(next);
        ++depth;
        idx[depth] = 0;
      }
    } else {
      if (depth == 0) break;
      --depth;
      idx[depth]++;
    }
  }
  return out;
}

static std::vector<std::string> default_labels(size_t n) {
  std::vector<std::string> l(n);
  for (size_t i = 0; i < n; ++i) l[i] = std::to_string(i);
  return l;
}

static void check_distinct(const std::vector<std::string>& labels) {
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate label '" + l + "'");
}

static Shape block_shape(const std::vector<Bond>& bonds, const std::vector<int64_t>& qi) {
  Shape s(bonds.size());
  for (size_t i = 0; i < bonds.size(); ++i) s[i] = bonds[i].deg(static_cast<size_t>(qi[i]));
  return s;
}

static bool bonds_symmetric(const std::vector<Bond>& bonds) {
  bool any = false, all = true;
  for (const auto& b : bonds) {
    any = any || b.is_symmetric();
    all = all && b.is_symmetric();
  }
  if (any && !all) throw std::invalid_argument("cannot mix symmetric and non-symmetric bonds in one tensor");
  if (any)
    for (const auto& b : bonds)
      if (b.syms() != bonds[0].syms()) throw std::invalid_argument("bonds carry different symmetry lists");
  return any;
}

UniTensor::Impl& UniTensor::impl() const {
  if (!impl_) throw std::logic_error("operation on a null UniTensor handle");
  return *impl_;
}

// ---- construction ----

UniTensor::UniTensor(const std::vector<Bond>& bonds, const std::vector<std::string>& labels, int64_t rowrank,
                     DType dtype, const std::string& name) {
  if (bonds.empty()) throw std::invalid_argument("a UniTensor needs at least one bond");
  auto m = std::make_shared<Impl>();
  m->name = name;
  m->labels = labels.empty() ? default_labels(bonds.size()) : labels;
  if (m->labels.size() != bonds.size())
    throw std::invalid_argument("got " + std::to_string(m->labels.size()) + " labels for " +
                                std::to_string(bonds.size()) + " bonds");
  check_distinct(m->labels);
  m->bonds = bonds;
  const int64_t r = static_cast<int64_t>(bonds.size());
  m->rowrank = rowrank < 0 ? (r + 1) / 2 : rowrank;
  if (m->rowrank > r) throw std::invalid_argument("rowrank exceeds rank");
  m->dtype = dtype;
  m->symmetric = bonds_symmetric(bonds);
  if (m->symmetric) {
    m->qn_indices = enumerate_blocks(bonds);
    for (const auto& qi : m->qn_indices) m->blocks.emplace_back(block_shape(bonds, qi), dtype);
  } else {
    Shape s;
    for (const auto& b : bonds) s.push_back(b.dim());
    m->blocks.emplace_back(s, dtype);
  }
  impl_ = std::move(m);
}

UniTensor::UniTensor(const DenseTensor& t, int64_t rowrank, const std::vector<std::string>& labels,
                     const std::string& name) {
  auto m = std::make_shared<Impl>();
  const int64_t r = t.rank();
  m->name = name;
  m->labels = labels.empty() ? default_labels(static_cast<size_t>(r)) : labels;
  if (static_cast<int64_t>(m->labels.size()) != r)
    throw std::invalid_argument("got " + std::to_string(m->labels.size()) + " labels for a rank-" +
                                std::to_string(r) + " tensor");
  check_distinct(m->labels);
  for (auto d : t.shape()) m->bonds.emplace_back(d);
  m->rowrank = rowrank < 0 ? r / 2 : rowrank;
  if (m->rowrank > r) throw std::invalid_argument("rowrank exceeds rank");
  m->dtype = t.dtype();
  m->blocks.push_back(t.alias());
  impl_ = std::move(m);
}

UniTensor UniTensor::from_blocks(const std::vector<Bond>& bonds, const std::vector<std::string>& labels,
                                 int64_t rowrank, std::vector<DenseTensor> blocks,
                                 std::vector<std::vector<int64_t>> qn_indices, const std::string& name) {
  const bool sym = bonds_symmetric(bonds) || !qn_indices.empty();
  auto m = std::make_shared<Impl>();
  m->name = name;
  m->labels = labels.empty() ? default_labels(bonds.size()) : labels;
  if (m->labels.size() != bonds.size()) throw std::invalid_argument("label count does not match bond count");
  check_distinct(m->labels);
  m->bonds = bonds;
  const int64_t r = static_cast<int64_t>(bonds.size());
  m->rowrank = rowrank < 0 ? (r + 1) / 2 : rowrank;
  if (m->rowrank > r) throw std::invalid_argument("rowrank exceeds rank");
  m->symmetric = sym;
  DType dt = DType::Float64;
  for (size_t k = 0; k < blocks.size(); ++k) dt = k == 0 ? blocks[k].dtype() : promote(dt, blocks[k].dtype());
  m->dtype = dt;
  if (!sym) {
    if (blocks.size() != 1) throw std::invalid_argument("a dense UniTensor has exactly one block");
    Shape s;
    for (const auto& b : bonds) s.push_back(b.dim());
    if (blocks[0].shape() != s)
      throw std::invalid_argument("block shape " + shape_string(blocks[0].shape()) + " does not match bonds " +
                                  shape_string(s));
    m->blocks.push_back(blocks[0].astype(dt));
  } else {
    if (qn_indices.size() != blocks.size()) throw std::invalid_argument("one qn-index tuple per block required");
    std::map<std::vector<int64_t>, size_t> given;
    for (size_t k = 0; k < qn_indices.size(); ++k)
      if (!given.emplace(qn_indices[k], k).second) throw std::invalid_argument("duplicate block");
    m->qn_indices = enumerate_blocks(bonds);
    size_t used = 0;
    for (const auto& qi : m->qn_indices) {
      auto it = given.find(qi);
      Shape s = block_shape(bonds, qi);
      if (it == given.end()) {
        m->blocks.emplace_back(s, dt);
      } else {
        const DenseTensor& b = blocks[it->second];
        if (b.shape() != s)
          throw std::invalid_argument("block shape " + shape_string(b.shape()) + " does not match sector sizes " +
                                      shape_string(s));
        m->blocks.push_back(b.astype(dt));
        ++used;
      }
    }
    if (used != given.size()) throw std::invalid_argument("a block violates the zero-flux rule");
  }
  UniTensor t;
  t.impl_ = std::move(m);
  return t;
}

UniTensor UniTensor::zeros(const Shape& shape, const std::vector<std::string>& labels, DType dtype) {
  return UniTensor(DenseTensor::zeros(shape, dtype), -1, labels);
}
UniTensor UniTensor::ones(const Shape& shape, const std::vector<std::string>& labels, DType dtype) {
  return UniTensor(DenseTensor::ones(shape, dtype), -1, labels);
}
UniTensor UniTensor::arange(int64_t n, const std::vector<std::string>& labels) {
  return UniTensor(DenseTensor::arange(n), -1, labels);
}
UniTensor UniTensor::eye(int64_t n, const std::vector<std::string>& labels, DType dtype) {
  return UniTensor(DenseTensor::eye(n, dtype), -1, labels);
}
UniTensor UniTensor::uniform(const Shape& shape, double low, double high, std::optional<uint64_t> seed,
                             const std::vector<std::string>& labels, DType dtype) {
  return UniTensor(DenseTensor::uniform(shape, low, high, seed, dtype), -1, labels);
}
UniTensor UniTensor::normal(const Shape& shape, double mean, double stddev, std::optional<uint64_t> seed,
                            const std::vector<std::string>& labels, DType dtype) {
  return UniTensor(DenseTensor::normal(shape, mean, stddev, seed, dtype), -1, labels);
}

// ---- metadata ----

UniTensor& UniTensor::set_name(const std::string& name) {
  impl().name = name;
  return *this;
}

const Bond& UniTensor::bond(int64_t i) const {
  if (i < 0 || i >= rank()) throw std::out_of_range("bond index out of range");
  return impl().bonds[static_cast<size_t>(i)];
}

const Bond& UniTensor::bond(const std::string& label) const {
  int64_t i = label_index(label);
  if (i < 0) throw std::invalid_argument("no bond labeled '" + label + "'");
  return impl().bonds[static_cast<size_t>(i)];
}

Shape UniTensor::shape() const {
  Shape s;
  for (const auto& b : impl().bonds) s.push_back(b.dim());
  return s;
}

bool UniTensor::is_contiguous() const {
  for (const auto& b : impl().blocks)
    if (!b.is_contiguous()) return false;
  return true;
}

bool UniTensor::is_tagged() const {
  for (const auto& b : impl().bonds)
    if (b.type() != BondType::REGULAR) return true;
  return false;
}

bool UniTensor::braket_form() const {
  if (!is_symmetric()) return false;
  for (int64_t i = 0; i < rank(); ++i) {
    BondType want = i < rowrank() ? BondType::IN : BondType::OUT;
    if (impl().bonds[static_cast<size_t>(i)].type() != want) return false;
  }
  return true;
}

std::vector<Symmetry> UniTensor::syms() const {
  if (!is_symmetric() || impl().bonds.empty()) return {};
  return impl().bonds[0].syms();
}

int64_t UniTensor::label_index(const std::string& label) const {
  const auto& l = impl().labels;
  auto it = std::find(l.begin(), l.end(), label);
  return it == l.end() ? -1 : static_cast<int64_t>(it - l.begin());
}

UniTensor UniTensor::shallow() const {
  UniTensor t;
  t.impl_ = std::make_shared<Impl>(impl());
  for (auto& b : t.impl_->blocks) b = b.alias();
  return t;
}

UniTensor UniTensor::relabel(const std::vector<std::string>& new_labels) const {
  UniTensor t = shallow();
  t.relabel_(new_labels);
  return t;
}
UniTensor UniTensor::relabel(const std::string& o, const std::string& n) const {
  UniTensor t = shallow();
  t.relabel_(o, n);
  return t;
}
UniTensor UniTensor::relabel(const std::vector<std::string>& o, const std::vector<std::string>& n) const {
  UniTensor t = shallow();
  t.relabel_(o, n);
  return t;
}

UniTensor& UniTensor::relabel_(const std::vector<std::string>& new_labels) {
  if (static_cast<int64_t>(new_labels.size()) != rank())
    throw std::invalid_argument("relabel needs " + std::to_string(rank()) + " labels");
  check_distinct(new_labels);
  impl().labels = new_labels;
  return *this;
}

UniTensor& UniTensor::relabel_(const std::string& o, const std::string& n) {
  return relabel_(std::vector<std::string>{o}, std::vector<std::string>{n});
}

UniTensor& UniTensor::relabel_(const std::vector<std::string>& o, const std::vector<std::string>& n) {
  if (o.size() != n.size()) throw std::invalid_argument("relabel: old and new label lists differ in length");
  std::vector<std::string> l = impl().labels;
  for (size_t k = 0; k < o.size(); ++k) {
    int64_t i = label_index(o[k]);
    if (i < 0) throw std::invalid_argument("relabel: no label '" + o[k] + "'");
    l[static_cast<size_t>(i)] = n[k];
  }
  check_distinct(l);
  impl().labels = std::move(l);
  return *this;
}

UniTensor UniTensor::set_rowrank(int64_t r) const {
  UniTensor t = shallow();
  t.set_rowrank_(r);
  return t;
}

UniTensor& UniTensor::set_rowrank_(int64_t r) {
  if (r < 0 || r > rank()) throw std::invalid_argument("rowrank " + std::to_string(r) + " out of range");
  impl().rowrank = r;
  return *this;
}

std::vector<int64_t> UniTensor::order_from_labels(const std::vector<std::string>& labels) const {
  if (static_cast<int64_t>(labels.size()) != rank())
    throw std::invalid_argument("expected " + std::to_string(rank()) + " labels");
  std::vector<int64_t> order;
  for (const auto& l : labels) {
    int64_t i = label_index(l);
    if (i < 0) throw std::invalid_argument("no label '" + l + "'");
    order.push_back(i);
  }
  return order;
}

UniTensor UniTensor::permute(const std::vector<std::string>& labels, int64_t rowrank) const {
  return permute(order_from_labels(labels), rowrank);
}

UniTensor UniTensor::permute(const std::vector<int64_t>& order, int64_t rowrank) const {
  UniTensor t = shallow();
  t.permute_(order, rowrank);
  return t;
}

UniTensor& UniTensor::permute_(const std::vector<std::string>& labels, int64_t rowrank) {
  return permute_(order_from_labels(labels), rowrank);
}

UniTensor& UniTensor::permute_(const std::vector<int64_t>& order, int64_t rowrank) {
  Impl& m = impl();
  const size_t r = m.labels.size();
  if (order.size() != r) throw std::invalid_argument("permutation length does not match rank");
  std::vector<bool> seen(r, false);
  for (auto o : order) {
    if (o < 0 || o >= static_cast<int64_t>(r) || seen[o]) throw std::invalid_argument("invalid permutation");
    seen[o] = true;
  }
  if (rowrank > static_cast<int64_t>(r)) throw std::invalid_argument("rowrank exceeds rank");
  std::vector<std::string> l(r);
  std::vector<Bond> b(r);
  for (size_t i = 0; i < r; ++i) {
    l[i] = m.labels[order[i]];
    b[i] = m.bonds[order[i]];
  }
  m.labels = std::move(l);
  m.bonds = std::move(b);
  for (auto& qi : m.qn_indices) {
    std::vector<int64_t> q(r);
    for (size_t i = 0; i < r; ++i) q[i] = qi[order[i]];
    qi = std::move(q);
  }
  for (auto& blk : m.blocks) blk.permute_(order);
  if (rowrank >= 0) m.rowrank = rowrank;
  return *this;
}

UniTensor UniTensor::contiguous() const {
  UniTensor t = shallow();
  t.contiguous_();
  return t;
}

UniTensor& UniTensor::contiguous_() {
  for (auto& b : impl().blocks) b.contiguous_();
  return *this;
}

// ---- elements ----

ElementProxy UniTensor::at(const std::vector<int64_t>& idx) {
  Impl& m = impl();
  if (!m.symmetric) {
    m.blocks[0].offset(idx);  // bounds check
    return ElementProxy(m.blocks[0], 0, idx);
  }
  if (idx.size() != m.bonds.size()) throw std::invalid_argument("expected one index per bond");
  std::vector<int64_t> qi(idx.size()), inner(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    auto [s, o] = m.bonds[i].locate(idx[i]);
    qi[i] = static_cast<int64_t>(s);
    inner[i] = o;
  }
  int64_t k = find_block(qi);
  if (k < 0) return ElementProxy(DenseTensor(), -1, {});
  return ElementProxy(m.blocks[static_cast<size_t>(k)], k, inner);
}

ElementProxy UniTensor::at(const std::vector<std::string>& labels, const std::vector<int64_t>& idx) {
  if (labels.size() != idx.size()) throw std::invalid_argument("at(): labels and indices differ in length");
  std::vector<int64_t> order = order_from_labels(labels);
  std::set<int64_t> distinct(order.begin(), order.end());
  if (distinct.size() != order.size()) throw std::invalid_argument("at(): repeated label");
  std::vector<int64_t> internal(idx.size());
  for (size_t k = 0; k < idx.size(); ++k) internal[static_cast<size_t>(order[k])] = idx[k];
  return at(internal);
}

bool UniTensor::elem_exists(const std::vector<int64_t>& idx) const {
  return const_cast<UniTensor*>(this)->at(idx).exists();
}

Scalar UniTensor::get_elem(const std::vector<int64_t>& idx) const {
  return const_cast<UniTensor*>(this)->at(idx).value();
}

void UniTensor::set_elem(const std::vector<int64_t>& idx, const Scalar& v) { at(idx).set(v); }

Scalar UniTensor::item() const {
  const Impl& m = impl();
  if (m.blocks.size() == 1 && m.blocks[0].size() == 1) return m.blocks[0].item();
  if (m.blocks.empty()) {
    Shape s = shape();
    if (shape_size(s) == 1) return Scalar(0.0).astype(m.dtype);
  }
  throw std::invalid_argument("item() needs a tensor with exactly one element");
}

UniTensor UniTensor::get(const std::vector<Slice>& slices) const {
  if (is_symmetric()) throw std::invalid_argument("slicing is only defined for dense UniTensors");
  DenseTensor t = impl().blocks[0].get(slices);
  std::vector<std::string> kept;
  for (int64_t i = 0; i < rank(); ++i) {
    bool single = static_cast<size_t>(i) < slices.size() && slices[i].kind == Slice::Kind::Index;
    if (!single) kept.push_back(impl().labels[static_cast<size_t>(i)]);
  }
  if (kept.empty()) kept.push_back("0");
  return UniTensor(t, -1, kept);
}

void UniTensor::set(const std::vector<Slice>& slices, const DenseTensor& src) {
  if (is_symmetric()) throw std::invalid_argument("slicing is only defined for dense UniTensors");
  impl().blocks[0].set(slices, src);
}

void UniTensor::set(const std::vector<Slice>& slices, const UniTensor& src) {
  if (src.is_symmetric()) throw std::invalid_argument("slice source must be dense");
  set(slices, src.impl().blocks[0]);
}

void UniTensor::set(const std::vector<Slice>& slices, const Scalar& v) {
  if (is_symmetric()) throw std::invalid_argument("slicing is only defined for dense UniTensors");
  impl().blocks[0].set(slices, v);
}

// ---- blocks ----

const std::vector<int64_t>& UniTensor::qn_indices(int64_t k) const {
  if (!is_symmetric()) throw std::logic_error("a dense UniTensor has no quantum-number indices");
  if (k < 0 || k >= Nblocks()) throw std::out_of_range("block index out of range");
  return impl().qn_indices[static_cast<size_t>(k)];
}

int64_t UniTensor::find_block(const std::vector<int64_t>& qi) const {
  const auto& all = impl().qn_indices;
  for (size_t k = 0; k < all.size(); ++k)
    if (all[k] == qi) return static_cast<int64_t>(k);
  return -1;
}

static void check_block_index(int64_t k, int64_t n) {
  if (k < 0 || k >= n)
    throw std::out_of_range("block " + std::to_string(k) + " does not exist (" + std::to_string(n) + " blocks)");
}

DenseTensor UniTensor::get_block(int64_t k) const {
  check_block_index(k, Nblocks());
  return impl().blocks[static_cast<size_t>(k)].clone();
}

DenseTensor UniTensor::get_block_(int64_t k) {
  check_block_index(k, Nblocks());
  return impl().blocks[static_cast<size_t>(k)];
}

DenseTensor UniTensor::get_block(const std::vector<std::string>& labels, const std::vector<int64_t>& qi) const {
  return const_cast<UniTensor*>(this)->get_block_(labels, qi).clone();
}

DenseTensor UniTensor::get_block_(const std::vector<std::string>& labels, const std::vector<int64_t>& qi) {
  if (!is_symmetric()) throw std::logic_error("a dense UniTensor has no quantum-number indices");
  if (labels.size() != qi.size()) throw std::invalid_argument("labels and qn indices differ in length");
  std::vector<int64_t> order = order_from_labels(labels);
  std::vector<int64_t> internal(qi.size());
  for (size_t k = 0; k < qi.size(); ++k) internal[static_cast<size_t>(order[k])] = qi[k];
  int64_t b = find_block(internal);
  if (b < 0) throw std::out_of_range("no block with these quantum-number indices");
  DenseTensor blk = impl().blocks[static_cast<size_t>(b)];
  bool identity = true;
  for (size_t k = 0; k < order.size(); ++k) identity = identity && order[k] == static_cast<int64_t>(k);
  return identity ? blk : blk.permute(order);
}

std::vector<DenseTensor> UniTensor::get_blocks() const {
  std::vector<DenseTensor> out;
  for (const auto& b : impl().blocks) out.push_back(b.clone());
  return out;
}

std::vector<DenseTensor> UniTensor::get_blocks_() { return impl().blocks; }

UniTensor& UniTensor::put_block(const DenseTensor& t, int64_t k) {
  check_block_index(k, Nblocks());
  DenseTensor& blk = impl().blocks[static_cast<size_t>(k)];
  if (t.shape() != blk.shape())
    throw std::invalid_argument("put_block: shape " + shape_string(t.shape()) + " does not match block shape " +
                                shape_string(blk.shape()));
  if (t.dtype() == DType::Complex128 && dtype() != DType::Complex128)
    throw std::invalid_argument("put_block: complex block into a real tensor");
  blk = t.astype(dtype()).clone();
  return *this;
}

UniTensor& UniTensor::put_block_(const DenseTensor& t, int64_t k) {
  check_block_index(k, Nblocks());
  DenseTensor& blk = impl().blocks[static_cast<size_t>(k)];
  if (t.shape() != blk.shape())
    throw std::invalid_argument("put_block_: shape " + shape_string(t.shape()) + " does not match block shape " +
                                shape_string(blk.shape()));
  if (t.dtype() != dtype()) throw std::invalid_argument("put_block_: dtype mismatch");
  blk = t;
  return *this;
}

static std::pair<int64_t, std::vector<int64_t>> resolve_block(const UniTensor& u,
                                                              const std::vector<std::string>& labels,
                                                              const std::vector<int64_t>& qi) {
  if (!u.is_symmetric()) throw std::logic_error("a dense UniTensor has no quantum-number indices");
  if (labels.size() != qi.size() || static_cast<int64_t>(labels.size()) != u.rank())
    throw std::invalid_argument("need one label and one qn index per bond");
  std::vector<int64_t> order;
  for (const auto& l : labels) {
    int64_t i = u.label_index(l);
    if (i < 0) throw std::invalid_argument("no label '" + l + "'");
    order.push_back(i);
  }
  std::vector<int64_t> internal(qi.size()), inverse(qi.size());
  for (size_t k = 0; k < qi.size(); ++k) {
    internal[static_cast<size_t>(order[k])] = qi[k];
    inverse[static_cast<size_t>(order[k])] = static_cast<int64_t>(k);
  }
  int64_t b = u.find_block(internal);
  if (b < 0) throw std::out_of_range("no block with these quantum-number indices");
  return {b, inverse};
}

UniTensor& UniTensor::put_block(const DenseTensor& t, const std::vector<std::string>& labels,
                                const std::vector<int64_t>& qi) {
  auto [b, inverse] = resolve_block(*this, labels, qi);
  return put_block(t.permute(inverse), b);
}

UniTensor& UniTensor::put_block_(const DenseTensor& t, const std::vector<std::string>& labels,
                                 const std::vector<int64_t>& qi) {
  auto [b, inverse] = resolve_block(*this, labels, qi);
  return put_block_(t.permute(inverse), b);
}

// ---- transforms ----

UniTensor UniTensor::Transpose() const {
  UniTensor t = shallow();
  t.Transpose_();
  return t;
}

UniTensor& UniTensor::Transpose_() {
  if (!is_tagged()) {
    const int64_t r = rank(), rr = rowrank();
    std::vector<int64_t> order;
    for (int64_t i = rr; i < r; ++i) order.push_back(i);
    for (int64_t i = 0; i < rr; ++i) order.push_back(i);
    permute_(order, r - rr);
  } else {
    for (auto& b : impl().bonds) b.redirect_();
  }
  return *this;
}

UniTensor UniTensor::Conj() const {
  UniTensor t = clone();
  t.Conj_();
  return t;
}

UniTensor& UniTensor::Conj_() {
  for (auto& b : impl().blocks) b.Conj_();
  return *this;
}

UniTensor UniTensor::Dagger() const {
  UniTensor t = Conj();
  t.Transpose_();
  return t;
}

UniTensor& UniTensor::Dagger_() {
  Conj_();
  return Transpose_();
}

UniTensor UniTensor::astype(DType d) const {
  UniTensor t = clone();
  for (auto& b : t.impl().blocks) b = b.astype(d);
  t.impl().dtype = d;
  return t;
}

UniTensor UniTensor::reshape(const Shape& shape, int64_t rowrank) const {
  if (is_symmetric()) throw std::invalid_argument("reshape is only defined for dense UniTensors");
  return UniTensor(impl().blocks[0].reshape(shape), rowrank);
}

UniTensor& UniTensor::convert_from(const UniTensor& src, bool force) {
  Impl& m = impl();
  if (src.rank() != rank()) throw std::invalid_argument("convert_from: rank mismatch");
  if (src.shape() != shape())
    throw std::invalid_argument("convert_from: shape " + shape_string(src.shape()) + " vs " +
                                shape_string(shape()));
  const DType dt = promote(m.dtype, src.dtype());
  if (!m.symmetric && !src.is_symmetric()) {
    m.blocks[0] = src.impl().blocks[0].astype(dt).clone();
  } else if (m.symmetric && src.is_symmetric()) {
    if (src.bonds() != bonds()) throw std::invalid_argument("convert_from: symmetric bonds differ");
    for (size_t k = 0; k < m.blocks.size(); ++k) {
      int64_t j = src.find_block(m.qn_indices[k]);
      m.blocks[k] = src.impl().blocks[static_cast<size_t>(j)].astype(dt).clone();
    }
  } else if (!m.symmetric) {
    // symmetric -> dense
    DenseTensor d(shape(), dt);
    const auto& sb = src.impl();
    for (size_t k = 0; k < sb.blocks.size(); ++k) {
      std::vector<Slice> sl;
      for (size_t i = 0; i < sb.bonds.size(); ++i) {
        auto off = sb.bonds[i].sector_offsets();
        int64_t s = sb.qn_indices[k][i];
        sl.push_back(Slice::range(off[s], off[s + 1]));
      }
      if (sl.empty()) d.set(std::vector<int64_t>{}, sb.blocks[k].item());
      else d.set(sl, sb.blocks[k]);
    }
    m.blocks[0] = d;
  } else {
    // dense -> symmetric
    DenseTensor s = src.impl().blocks[0].contiguous().astype(dt);
    std::vector<DenseTensor> nb;
    double captured = 0.0;
    for (size_t k = 0; k < m.blocks.size(); ++k) {
      std::vector<Slice> sl;
      for (size_t i = 0; i < m.bonds.size(); ++i) {
        auto off = m.bonds[i].sector_offsets();
        int64_t q = m.qn_indices[k][i];
        sl.push_back(Slice::range(off[q], off[q + 1]));
      }
      DenseTensor piece = sl.empty() ? s.clone() : s.get(sl).reshape(m.blocks[k].shape());
      double n = piece.Norm();
      captured += n * n;
      nb.push_back(piece);
    }
    if (!force) {
      // Any element outside the allowed blocks must be exactly zero.
      std::vector<std::vector<int64_t>> sector_of(m.bonds.size());
      for (size_t i = 0; i < m.bonds.size(); ++i)
        for (int64_t x = 0; x < m.bonds[i].dim(); ++x)
          sector_of[i].push_back(static_cast<int64_t>(m.bonds[i].locate(x).first));
      std::set<std::vector<int64_t>> allowed(m.qn_indices.begin(), m.qn_indices.end());
      auto vals = s.to_vector<cplx>();
      Shape sh = shape();
      std::vector<int64_t> idx(sh.size(), 0), qi(sh.size());
      for (size_t flat = 0; flat < vals.size(); ++flat) {
        if (vals[flat] != cplx(0.0, 0.0)) {
          for (size_t i = 0; i < sh.size(); ++i) qi[i] = sector_of[i][idx[i]];
          if (!allowed.count(qi))
            throw std::invalid_argument(
                "convert_from: source has a nonzero element that violates the symmetry (use force to drop it)");
        }
        for (int64_t ax = static_cast<int64_t>(sh.size()) - 1; ax >= 0; --ax) {
          if (++idx[ax] < sh[ax]) break;
          idx[ax] = 0;
        }
      }
    }
    (void)captured;
    m.blocks = std::move(nb);
  }
  m.dtype = dt;
  return *this;
}

UniTensor UniTensor::to_dense() const {
  if (!is_symmetric()) return clone();
  std::vector<Bond> b;
  for (const auto& x : bonds()) b.emplace_back(x.dim(), x.type());
  if (b.empty()) {
    UniTensor t(DenseTensor::full({}, item(), dtype()), 0, {}, name());
    return t;
  }
  UniTensor d(b, labels(), rowrank(), dtype(), name());
  d.convert_from(*this);
  return d;
}

UniTensor UniTensor::clone() const {
  UniTensor t;
  t.impl_ = std::make_shared<Impl>(impl());
  for (auto& b : t.impl_->blocks) b = b.clone();
  return t;
}

bool UniTensor::same_data(const UniTensor& o) const {
  const auto& a = impl().blocks;
  const auto& b = o.impl().blocks;
  if (a.size() != b.size() || a.empty()) return false;
  for (size_t k = 0; k < a.size(); ++k)
    if (!a[k].same_data(b[k])) return false;
  return true;
}

double UniTensor::Norm() const {
  double s = 0.0;
  for (const auto& b : impl().blocks) {
    double n = b.Norm();
    s += n * n;
  }
  return std::sqrt(s);
}

// ---- arithmetic ----

const DenseTensor& UniTensor::block(int64_t k) const {
  check_block_index(k, Nblocks());
  return impl().blocks[static_cast<size_t>(k)];
}

namespace {

void check_compatible(const UniTensor& a, const UniTensor& b) {
  if (a.is_symmetric() != b.is_symmetric())
    throw std::invalid_argument("arithmetic between a symmetric and a dense UniTensor (convert first)");
  if (a.rank() != b.rank()) throw std::invalid_argument("arithmetic on tensors of different rank");
  for (int64_t i = 0; i < a.rank(); ++i) {
    const Bond& x = a.bond(i);
    const Bond& y = b.bond(i);
    if (x.dim() != y.dim())
      throw std::invalid_argument("arithmetic: bond " + std::to_string(i) + " has dimension " +
                                  std::to_string(x.dim()) + " vs " + std::to_string(y.dim()));
    if (a.is_symmetric() && x != y)
      throw std::invalid_argument("arithmetic: bond " + std::to_string(i) + " sectors or direction differ");
  }
}

template <class F>
UniTensor blockwise(const UniTensor& a, const UniTensor& b, F op) {
  check_compatible(a, b);
  std::vector<DenseTensor> blocks;
  std::vector<std::vector<int64_t>> qi;
  for (int64_t k = 0; k < a.Nblocks(); ++k) {
    int64_t j = k;
    if (a.is_symmetric()) {
      qi.push_back(a.qn_indices(k));
      j = b.find_block(qi.back());
    }
    blocks.push_back(op(a.block(k), b.block(j)));
  }
  UniTensor r = UniTensor::from_blocks(a.bonds(), a.labels(), a.rowrank(), std::move(blocks), std::move(qi), a.name());
  return r;
}

template <class F>
UniTensor blockwise_scalar(const UniTensor& a, F op) {
  std::vector<DenseTensor> blocks;
  std::vector<std::vector<int64_t>> qi;
  for (int64_t k = 0; k < a.Nblocks(); ++k) {
    if (a.is_symmetric()) qi.push_back(a.qn_indices(k));
    blocks.push_back(op(a.block(k)));
  }
  return UniTensor::from_blocks(a.bonds(), a.labels(), a.rowrank(), std::move(blocks), std::move(qi), a.name());
}

void reject_symmetric(const UniTensor& a, const char* op) {
  if (a.is_symmetric())
    throw std::invalid_argument(std::string("scalar '") + op +
                                "' on a symmetric UniTensor would fill symmetry-forbidden elements; "
                                "operate on the blocks instead");
}

}  // namespace

UniTensor operator+(const UniTensor& a, const UniTensor& b) {
  return blockwise(a, b, [](const DenseTensor& x, const DenseTensor& y) { return x + y; });
}
UniTensor operator-(const UniTensor& a, const UniTensor& b) {
  return blockwise(a, b, [](const DenseTensor& x, const DenseTensor& y) { return x - y; });
}
UniTensor operator*(const UniTensor& a, const UniTensor& b) {
  return blockwise(a, b, [](const DenseTensor& x, const DenseTensor& y) { return x * y; });
}
UniTensor operator/(const UniTensor& a, const UniTensor& b) {
  return blockwise(a, b, [](const DenseTensor& x, const DenseTensor& y) { return x / y; });
}
UniTensor operator+(const UniTensor& a, const Scalar& s) {
  reject_symmetric(a, "+");
  return blockwise_scalar(a, [&](const DenseTensor& x) { return x + s; });
}
UniTensor operator-(const UniTensor& a, const Scalar& s) {
  reject_symmetric(a, "-");
  return blockwise_scalar(a, [&](const DenseTensor& x) { return x - s; });
}
UniTensor operator*(const UniTensor& a, const Scalar& s) {
  return blockwise_scalar(a, [&](const DenseTensor& x) { return x * s; });
}
UniTensor operator/(const UniTensor& a, const Scalar& s) {
  return blockwise_scalar(a, [&](const DenseTensor& x) { return x / s; });
}
UniTensor operator+(const Scalar& s, const UniTensor& a) { return a + s; }
UniTensor operator-(const Scalar& s, const UniTensor& a) {
  reject_symmetric(a, "-");
  return blockwise_scalar(a, [&](const DenseTensor& x) { return s - x; });
}
UniTensor operator*(const Scalar& s, const UniTensor& a) { return a * s; }
UniTensor operator-(const UniTensor& a) {
  return blockwise_scalar(a, [](const DenseTensor& x) { return -x; });
}

UniTensor& UniTensor::operator+=(const UniTensor& o) {
  *impl_ = *(*this + o).impl_;
  return *this;
}
UniTensor& UniTensor::operator-=(const UniTensor& o) {
  *impl_ = *(*this - o).impl_;
  return *this;
}
UniTensor& UniTensor::operator*=(const Scalar& s) {
  *impl_ = *(*this * s).impl_;
  return *this;
}
UniTensor& UniTensor::operator/=(const Scalar& s) {
  *impl_ = *(*this / s).impl_;
  return *this;
}

cplx vdot(const UniTensor& a, const UniTensor& b) {
  if (a.Nblocks() != b.Nblocks() || a.shape() != b.shape()) throw std::invalid_argument("vdot: structure mismatch");
  cplx s(0.0, 0.0);
  for (int64_t k = 0; k < a.Nblocks(); ++k) {
    int64_t j = a.is_symmetric() ? b.find_block(a.qn_indices(k)) : 0;
    if (j < 0) throw std::invalid_argument("vdot: structure mismatch");
    const DenseTensor& x = a.block(k);
    const DenseTensor& y = b.block(j);
    if (x.dtype() == DType::Float64 && y.dtype() == DType::Float64) {
      DenseTensor cx = x.contiguous(), cy = y.contiguous();
      const double* px = cx.data<double>();
      const double* py = cy.data<double>();
      double acc = 0.0;
      for (int64_t i = 0; i < cx.size(); ++i) acc += px[i] * py[i];
      s += acc;
    } else {
      auto vx = x.to_vector<cplx>();
      auto vy = y.to_vector<cplx>();
      for (size_t i = 0; i < vx.size(); ++i) s += std::conj(vx[i]) * vy[i];
    }
  }
  return s;
}

// ---- printing ----

static const char* yes_no(bool b) { return b ? "True" : "False"; }

void UniTensor::print_diagram(std::ostream& os) const {
  const Impl& m = impl();
  os << "-----------------------\n";
  os << "tensor Name : " << m.name << "\n";
  os << "tensor Rank : " << m.labels.size() << "\n";
  if (m.symmetric) {
    os << "contiguous  : " << yes_no(is_contiguous()) << "\n";
    os << "valid blocks : " << m.blocks.size() << "\n";
  } else {
    os << "block_form  : False\n";
  }
  os << "is_diag     : False\n";
  os << "on device   : CPU\n";
  if (m.symmetric) os << "braket_form : " << yes_no(braket_form()) << "\n";
  const int64_t r = rank(), rr = rowrank();
  const int64_t rows = std::max(rr, r - rr);
  size_t lw = 0;
  for (int64_t i = 0; i < rr; ++i) lw = std::max(lw, m.labels[static_cast<size_t>(i)].size());
  const std::string pad(lw + 6, ' ');
  auto left_leg = [&](int64_t i) {
    const Bond& b = m.bonds[static_cast<size_t>(i)];
    std::ostringstream s;
    s << std::setw(static_cast<int>(lw + 3)) << m.labels[static_cast<size_t>(i)]
      << (b.type() == BondType::IN ? " >" : b.type() == BondType::OUT ? " <" : " _") << "___|";
    return s.str();
  };
  auto right_leg = [&](int64_t i) {
    const Bond& b = m.bonds[static_cast<size_t>(i)];
    std::ostringstream s;
    s << "|___" << (b.type() == BondType::OUT ? "> " : b.type() == BondType::IN ? "< " : "_ ")
      << m.labels[static_cast<size_t>(i)];
    return s.str();
  };
  os << pad << "  ---------\n";
  os << pad << " /         \\\n";
  for (int64_t row = 0; row < rows; ++row) {
    const int64_t li = row, ri = rr + row;
    std::ostringstream line;
    if (li < rr) line << left_leg(li);
    else line << pad << " |";
    std::ostringstream mid;
    mid << std::setw(3) << (li < rr ? std::to_string(m.bonds[static_cast<size_t>(li)].dim()) : "")
        << "   " << std::setw(3) << (ri < r ? std::to_string(m.bonds[static_cast<size_t>(ri)].dim()) : "") << " ";
    line << mid.str();
    if (ri < r) line << right_leg(ri);
    else line << "|";
    os << line.str() << "\n";
    if (row + 1 < rows) os << pad << " |         |\n";
  }
  os << pad << " \\         /\n";
  os << pad << "  ---------\n";
}

void UniTensor::print_blocks(std::ostream& os) const {
  const Impl& m = impl();
  os << "-------- start of print ---------\n";
  os << "Tensor name: " << m.name << "\n";
  if (m.symmetric) os << "braket_form : " << yes_no(braket_form()) << "\n";
  os << "is_diag    : False\n";
  os << "contiguous : " << yes_no(is_contiguous()) << "\n\n";
  for (size_t k = 0; k < m.blocks.size(); ++k) {
    if (m.symmetric) {
      os << "========================\nBLOCK [#" << k << "]\n |- []   : Qn index\n |- Sym(): Qnum of correspond symmetry\n";
      for (size_t i = 0; i < m.bonds.size(); ++i) {
        os << "  " << m.labels[i] << " [" << m.qn_indices[k][i] << "] (";
        const Qn& q = m.bonds[i].qn(static_cast<size_t>(m.qn_indices[k][i]));
        for (size_t c = 0; c < q.size(); ++c) os << (c ? "," : "") << m.bonds[i].syms()[c].name() << ":" << q[c];
        os << ") " << (m.bonds[i].type() == BondType::IN ? "IN" : "OUT") << "\n";
      }
    }
    os << m.blocks[k] << "\n";
  }
}

std::ostream& operator<<(std::ostream& os, const UniTensor& t) {
  if (!t.defined()) return os << "<null UniTensor>\n";
  t.print_blocks(os);
  return os;
}

}  // namespace tnx
