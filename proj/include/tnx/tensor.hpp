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
#include <stdexcept>
#include <string>
#include <vector>

#include "tnx/dtype.hpp"
#include "tnx/storage.hpp"

namespace tnx {

using Shape = std::vector<int64_t>;

/// One entry of a slicing request: a single index, a half-open range, or everything.
struct Slice {
  enum class Kind { All, Index, Range };
  Kind kind = Kind::All;
  int64_t start = 0;
  int64_t stop = 0;

  static Slice all() { return Slice{}; }
  static Slice index(int64_t i) { return Slice{Kind::Index, i, i + 1}; }
  static Slice range(int64_t start, int64_t stop) { return Slice{Kind::Range, start, stop}; }
};

/// Dense strided array. A DenseTensor is a handle: copies alias the same tensor,
/// clone() makes an independent one. permute() is lazy; contiguous() materializes
/// the row-major layout of the logical order.
class DenseTensor {
 public:
  /// Null handle; most calls on it throw.
  DenseTensor() = default;
  /// Zero-filled tensor.
  explicit DenseTensor(const Shape& shape, DType dtype = DType::Float64);
  DenseTensor(const Shape& shape, Storage storage);

  static DenseTensor zeros(const Shape& shape, DType dtype = DType::Float64);
  static DenseTensor ones(const Shape& shape, DType dtype = DType::Float64);
  static DenseTensor full(const Shape& shape, const Scalar& value, DType dtype);
  /// 0, 1, ..., n-1.
  static DenseTensor arange(int64_t n, DType dtype = DType::Float64);
  /// start, start+step, ... up to (excluding) stop.
  static DenseTensor arange(double start, double stop, double step, DType dtype = DType::Float64);
  static DenseTensor eye(int64_t n, DType dtype = DType::Float64);
  /// Uniform in [low, high). The generator is std::mt19937_64 seeded with seed
  /// (or a fresh std::random_device draw when absent).
  static DenseTensor uniform(const Shape& shape, double low = 0.0, double high = 1.0,
                             std::optional<uint64_t> seed = std::nullopt,
                             DType dtype = DType::Float64);
  static DenseTensor normal(const Shape& shape, double mean = 0.0, double stddev = 1.0,
                            std::optional<uint64_t> seed = std::nullopt,
                            DType dtype = DType::Float64);
  template <class T>
  static DenseTensor from_vector(const std::vector<T>& v, const Shape& shape);

  bool defined() const { return static_cast<bool>(impl_); }
  const Shape& shape() const { return impl().shape; }
  int64_t rank() const { return static_cast<int64_t>(impl().shape.size()); }
  int64_t size() const;
  DType dtype() const { return impl().storage->dtype(); }
  bool is_contiguous() const;
  /// mapper()[i] is the storage axis backing logical axis i.
  const std::vector<int64_t>& mapper() const { return impl().mapper; }
  const std::shared_ptr<Storage>& storage() const { return impl().storage; }

  DenseTensor permute(const std::vector<int64_t>& order) const;
  DenseTensor& permute_(const std::vector<int64_t>& order);
  DenseTensor reshape(const Shape& shape) const;
  DenseTensor& reshape_(const Shape& shape);
  DenseTensor contiguous() const;
  DenseTensor& contiguous_();
  DenseTensor clone() const;
  DenseTensor astype(DType dtype) const;
  /// New handle over the same storage and metadata.
  DenseTensor alias() const;

  int64_t offset(const std::vector<int64_t>& idx) const;
  Scalar get(const std::vector<int64_t>& idx) const;
  void set(const std::vector<int64_t>& idx, const Scalar& v);
  /// Value of a one-element tensor.
  Scalar item() const;
  template <class T> T& at(const std::vector<int64_t>& idx);
  template <class T> const T& at(const std::vector<int64_t>& idx) const;

  /// Slice read; always a fresh copy. Single-index axes are dropped
  /// (shape [1] if every axis is a single index).
  DenseTensor get(const std::vector<Slice>& slices) const;
  /// Slice write through this handle; src must have the slice shape.
  void set(const std::vector<Slice>& slices, const DenseTensor& src);
  void set(const std::vector<Slice>& slices, const Scalar& v);

  /// Elements in logical row-major order, converted to T.
  template <class T> std::vector<T> to_vector() const;
  /// Pointer to the first element of a contiguous tensor of element type T.
  template <class T> T* data();
  template <class T> const T* data() const;

  DenseTensor& operator+=(const DenseTensor& o);
  DenseTensor& operator-=(const DenseTensor& o);
  DenseTensor& operator*=(const DenseTensor& o);
  DenseTensor& operator/=(const DenseTensor& o);
  DenseTensor& operator+=(const Scalar& s);
  DenseTensor& operator-=(const Scalar& s);
  DenseTensor& operator*=(const Scalar& s);
  DenseTensor& operator/=(const Scalar& s);

  DenseTensor Conj() const;
  DenseTensor& Conj_();
  DenseTensor Pow(double p) const;
  DenseTensor& Pow_(double p);
  double Norm() const;

  bool is(const DenseTensor& o) const { return impl_ == o.impl_; }
  bool same_data(const DenseTensor& o) const {
    return defined() && o.defined() && impl_->storage == o.impl_->storage;
  }

 private:
  struct Impl {
    Shape shape;
    std::vector<int64_t> mapper;
    std::vector<int64_t> strides;  // logical strides into storage
    std::shared_ptr<Storage> storage;
  };
  Impl& impl() const {
    if (!impl_) throw std::logic_error("operation on a null DenseTensor handle");
    return *impl_;
  }
  void replace_storage(Storage s);
  std::shared_ptr<Impl> impl_;
};

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator*(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator/(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator+(const DenseTensor& a, const Scalar& s);
DenseTensor operator-(const DenseTensor& a, const Scalar& s);
DenseTensor operator*(const DenseTensor& a, const Scalar& s);
DenseTensor operator/(const DenseTensor& a, const Scalar& s);
DenseTensor operator+(const Scalar& s, const DenseTensor& a);
DenseTensor operator-(const Scalar& s, const DenseTensor& a);
DenseTensor operator*(const Scalar& s, const DenseTensor& a);
DenseTensor operator/(const Scalar& s, const DenseTensor& a);
DenseTensor operator-(const DenseTensor& a);

/// Kronecker product of two matrices: K[i*p+k, j*q+l] = A[i,j] * B[k,l].
DenseTensor Kron(const DenseTensor& a, const DenseTensor& b);
/// Largest |a - b| over all elements; shapes must agree.
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

/// Row-major strides of a shape.
std::vector<int64_t> row_major_strides(const Shape& shape);
int64_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

std::ostream& operator<<(std::ostream& os, const DenseTensor& t);

// ---- template definitions ----

template <class T>
DenseTensor DenseTensor::from_vector(const std::vector<T>& v, const Shape& shape) {
  if (shape_size(shape) != static_cast<int64_t>(v.size()))
    throw std::invalid_argument("from_vector: " + std::to_string(v.size()) +
                                " values do not fill shape " + shape_string(shape));
  if constexpr (std::is_same_v<T, bool>) {
    std::vector<uint8_t> b(v.begin(), v.end());
    return DenseTensor(shape, Storage(Storage::Data(std::move(b))));
  } else if constexpr (std::is_same_v<T, cplx> || std::is_same_v<T, double> ||
                       std::is_same_v<T, int64_t> || std::is_same_v<T, uint8_t>) {
    return DenseTensor(shape, Storage(Storage::Data(v)));
  } else if constexpr (std::is_integral_v<T>) {
    return DenseTensor(shape, Storage(Storage::Data(std::vector<int64_t>(v.begin(), v.end()))));
  } else {
    return DenseTensor(shape, Storage(Storage::Data(std::vector<double>(v.begin(), v.end()))));
  }
}

template <class T>
T& DenseTensor::at(const std::vector<int64_t>& idx) {
  return impl().storage->template vec<T>()[static_cast<size_t>(offset(idx))];
}

template <class T>
const T& DenseTensor::at(const std::vector<int64_t>& idx) const {
  return impl().storage->template vec<T>()[static_cast<size_t>(offset(idx))];
}

template <class T>
T* DenseTensor::data() {
  if (!is_contiguous()) throw std::logic_error("data() needs a contiguous tensor");
  return impl().storage->template vec<T>().data();
}

template <class T>
const T* DenseTensor::data() const {
  if (!is_contiguous()) throw std::logic_error("data() needs a contiguous tensor");
  return impl().storage->template vec<T>().data();
}

template <class T>
std::vector<T> DenseTensor::to_vector() const {
  DenseTensor c = contiguous().astype(dtype_of<T>());
  return c.storage()->template vec<T>();
}

}  // namespace tnx
