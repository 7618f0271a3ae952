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
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tnx/bond.hpp"
#include "tnx/tensor.hpp"

namespace tnx {

class UniTensor;

/// Reference to one element address of a UniTensor. For symmetric tensors the
/// address may fall outside every stored block; exists() then reports false and
/// reading or writing throws.
class ElementProxy {
 public:
  bool exists() const { return block_ >= 0; }
  Scalar value() const;
  void set(const Scalar& v);
  ElementProxy& operator=(const Scalar& v) {
    set(v);
    return *this;
  }
  operator Scalar() const { return value(); }

 private:
  friend class UniTensor;
  ElementProxy(DenseTensor block, int64_t block_id, std::vector<int64_t> idx)
      : block_t_(std::move(block)), block_(block_id), idx_(std::move(idx)) {}
  DenseTensor block_t_;
  int64_t block_;
  std::vector<int64_t> idx_;
};

/// Labeled tensor with bonds and a rowrank. Holds either one dense block or the
/// zero-flux blocks of a symmetric tensor.
///
/// UniTensor is a handle: assignment aliases, clone() deep-copies. Methods with a
/// trailing underscore modify the tensor in place; the others return a new tensor
/// whose metadata is fresh but whose element storage is shared where possible.
class UniTensor {
 public:
  UniTensor() = default;
  /// Zero-filled tensor from bonds. Symmetric when the bonds carry sectors.
  /// Default rowrank is ceil(rank/2).
  explicit UniTensor(const std::vector<Bond>& bonds, const std::vector<std::string>& labels = {},
                     int64_t rowrank = -1, DType dtype = DType::Float64, const std::string& name = "");
  /// Wraps a dense tensor (shares its storage). Default rowrank is floor(rank/2).
  explicit UniTensor(const DenseTensor& t, int64_t rowrank = -1, const std::vector<std::string>& labels = {},
                     const std::string& name = "");

  static UniTensor zeros(const Shape& shape, const std::vector<std::string>& labels = {},
                         DType dtype = DType::Float64);
  static UniTensor ones(const Shape& shape, const std::vector<std::string>& labels = {},
                        DType dtype = DType::Float64);
  static UniTensor arange(int64_t n, const std::vector<std::string>& labels = {});
  static UniTensor eye(int64_t n, const std::vector<std::string>& labels = {}, DType dtype = DType::Float64);
  static UniTensor uniform(const Shape& shape, double low = 0.0, double high = 1.0,
                           std::optional<uint64_t> seed = std::nullopt,
                           const std::vector<std::string>& labels = {}, DType dtype = DType::Float64);
  static UniTensor normal(const Shape& shape, double mean = 0.0, double stddev = 1.0,
                          std::optional<uint64_t> seed = std::nullopt,
                          const std::vector<std::string>& labels = {}, DType dtype = DType::Float64);

  bool defined() const { return static_cast<bool>(impl_); }

  // ---- metadata ----
  const std::string& name() const { return impl().name; }
  UniTensor& set_name(const std::string& name);
  const std::vector<std::string>& labels() const { return impl().labels; }
  const std::vector<Bond>& bonds() const { return impl().bonds; }
  const Bond& bond(int64_t i) const;
  const Bond& bond(const std::string& label) const;
  Shape shape() const;
  int64_t rank() const { return static_cast<int64_t>(impl().labels.size()); }
  int64_t rowrank() const { return impl().rowrank; }
  DType dtype() const { return impl().dtype; }
  bool is_symmetric() const { return impl().symmetric; }
  bool is_blockform() const { return impl().symmetric; }
  bool is_contiguous() const;
  bool is_tagged() const;
  bool braket_form() const;
  std::vector<Symmetry> syms() const;
  /// Position of a label, or -1.
  int64_t label_index(const std::string& label) const;

  UniTensor relabel(const std::vector<std::string>& new_labels) const;
  UniTensor relabel(const std::string& old_label, const std::string& new_label) const;
  UniTensor relabel(const std::vector<std::string>& old_labels, const std::vector<std::string>& new_labels) const;
  // Braced lists of string literals would otherwise be ambiguous.
  UniTensor relabel(std::initializer_list<std::string> new_labels) const {
    return relabel(std::vector<std::string>(new_labels));
  }
  UniTensor relabel(std::initializer_list<std::string> old_labels, std::initializer_list<std::string> new_labels) const {
    return relabel(std::vector<std::string>(old_labels), std::vector<std::string>(new_labels));
  }
  UniTensor& relabel_(const std::vector<std::string>& new_labels);
  UniTensor& relabel_(const std::string& old_label, const std::string& new_label);
  UniTensor& relabel_(const std::vector<std::string>& old_labels, const std::vector<std::string>& new_labels);
  UniTensor& relabel_(std::initializer_list<std::string> new_labels) {
    return relabel_(std::vector<std::string>(new_labels));
  }
  UniTensor& relabel_(std::initializer_list<std::string> old_labels, std::initializer_list<std::string> new_labels) {
    return relabel_(std::vector<std::string>(old_labels), std::vector<std::string>(new_labels));
  }

  UniTensor set_rowrank(int64_t r) const;
  UniTensor& set_rowrank_(int64_t r);

  /// Lazy permutation. rowrank < 0 keeps the current rowrank.
  UniTensor permute(const std::vector<std::string>& labels, int64_t rowrank = -1) const;
  UniTensor permute(const std::vector<int64_t>& order, int64_t rowrank = -1) const;
  UniTensor permute(std::initializer_list<std::string> labels, int64_t rowrank = -1) const {
    return permute(std::vector<std::string>(labels), rowrank);
  }
  UniTensor& permute_(const std::vector<std::string>& labels, int64_t rowrank = -1);
  UniTensor& permute_(const std::vector<int64_t>& order, int64_t rowrank = -1);

  UniTensor contiguous() const;
  UniTensor& contiguous_();

  // ---- elements ----
  ElementProxy at(const std::vector<int64_t>& idx);
  ElementProxy at(const std::vector<std::string>& labels, const std::vector<int64_t>& idx);
  bool elem_exists(const std::vector<int64_t>& idx) const;
  Scalar get_elem(const std::vector<int64_t>& idx) const;
  void set_elem(const std::vector<int64_t>& idx, const Scalar& v);
  /// Value of a tensor with exactly one element (e.g. a rank-0 contraction result).
  Scalar item() const;

  /// Dense slicing in internal bond order; reads copy, writes go through this handle.
  UniTensor get(const std::vector<Slice>& slices) const;
  void set(const std::vector<Slice>& slices, const DenseTensor& src);
  void set(const std::vector<Slice>& slices, const UniTensor& src);
  void set(const std::vector<Slice>& slices, const Scalar& v);

  // ---- blocks ----
  int64_t Nblocks() const { return static_cast<int64_t>(impl().blocks.size()); }
  /// Sector index per bond (current bond order) of block k.
  const std::vector<int64_t>& qn_indices(int64_t k) const;
  /// Block with the given sector indices, or -1.
  int64_t find_block(const std::vector<int64_t>& qn_indices) const;
  /// The block handle itself (no copy).
  const DenseTensor& block(int64_t k) const;
  DenseTensor get_block(int64_t k = 0) const;
  DenseTensor get_block(const std::vector<std::string>& labels, const std::vector<int64_t>& qn_indices) const;
  DenseTensor get_block_(int64_t k = 0);
  DenseTensor get_block_(const std::vector<std::string>& labels, const std::vector<int64_t>& qn_indices);
  std::vector<DenseTensor> get_blocks() const;
  std::vector<DenseTensor> get_blocks_();
  /// Copies t into block k.
  UniTensor& put_block(const DenseTensor& t, int64_t k = 0);
  UniTensor& put_block(const DenseTensor& t, const std::vector<std::string>& labels,
                       const std::vector<int64_t>& qn_indices);
  /// Makes block k share t.
  UniTensor& put_block_(const DenseTensor& t, int64_t k = 0);
  UniTensor& put_block_(const DenseTensor& t, const std::vector<std::string>& labels,
                        const std::vector<int64_t>& qn_indices);

  // ---- transforms ----
  UniTensor Transpose() const;
  UniTensor& Transpose_();
  UniTensor Conj() const;
  UniTensor& Conj_();
  UniTensor Dagger() const;
  UniTensor& Dagger_();
  UniTensor astype(DType t) const;
  /// Dense tensors only; result has default labels.
  UniTensor reshape(const Shape& shape, int64_t rowrank = -1) const;
  /// Fills this tensor from src, which must have the same per-bond dimensions.
  /// Dense to symmetric keeps the zero-flux elements; nonzero elements elsewhere
  /// throw unless force is set.
  UniTensor& convert_from(const UniTensor& src, bool force = false);
  /// Dense copy of a symmetric tensor (or a clone of a dense one).
  UniTensor to_dense() const;

  /// Low-level constructor from explicit parts; validates block shapes and,
  /// for symmetric tensors, that the blocks are exactly the zero-flux set.
  static UniTensor from_blocks(const std::vector<Bond>& bonds, const std::vector<std::string>& labels,
                               int64_t rowrank, std::vector<DenseTensor> blocks,
                               std::vector<std::vector<int64_t>> qn_indices = {}, const std::string& name = "");

  UniTensor clone() const;
  bool is(const UniTensor& o) const { return impl_ == o.impl_; }
  /// True when every block shares element storage with the corresponding block of o.
  bool same_data(const UniTensor& o) const;
  double Norm() const;

  UniTensor& operator+=(const UniTensor& o);
  UniTensor& operator-=(const UniTensor& o);
  UniTensor& operator*=(const Scalar& s);
  UniTensor& operator/=(const Scalar& s);

  void print_diagram(std::ostream& os) const;
  void print_blocks(std::ostream& os) const;

 private:
  struct Impl {
    std::string name;
    std::vector<std::string> labels;
    std::vector<Bond> bonds;
    int64_t rowrank = 0;
    bool symmetric = false;
    DType dtype = DType::Float64;
    std::vector<DenseTensor> blocks;
    std::vector<std::vector<int64_t>> qn_indices;
  };
  Impl& impl() const;
  /// Metadata copy whose blocks alias (share storage with) ours.
  UniTensor shallow() const;
  std::vector<int64_t> order_from_labels(const std::vector<std::string>& labels) const;
  std::shared_ptr<Impl> impl_;
};

UniTensor operator+(const UniTensor& a, const UniTensor& b);
UniTensor operator-(const UniTensor& a, const UniTensor& b);
UniTensor operator*(const UniTensor& a, const UniTensor& b);
UniTensor operator/(const UniTensor& a, const UniTensor& b);
UniTensor operator+(const UniTensor& a, const Scalar& s);
UniTensor operator-(const UniTensor& a, const Scalar& s);
UniTensor operator*(const UniTensor& a, const Scalar& s);
UniTensor operator/(const UniTensor& a, const Scalar& s);
UniTensor operator+(const Scalar& s, const UniTensor& a);
UniTensor operator-(const Scalar& s, const UniTensor& a);
UniTensor operator*(const Scalar& s, const UniTensor& a);
UniTensor operator-(const UniTensor& a);

/// Sum over all elements of conj(a) * b. a and b must have identical structure.
cplx vdot(const UniTensor& a, const UniTensor& b);

/// Zero-flux sector tuples of a bond list, in row-major order (first bond outermost).
std::vector<std::vector<int64_t>> enumerate_blocks(const std::vector<Bond>& bonds);
/// Flux contribution of sector s on bond b: q for IN, reverse(q) for OUT.
Qn flux_contribution(const Bond& b, size_t sector);

std::ostream& operator<<(std::ostream& os, const UniTensor& t);

}  // namespace tnx
