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

#include "tnx/tensor.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

namespace tnx {

std::vector<int64_t> row_major_strides(const Shape& shape) {
  std::vector<int64_t> s(shape.size(), 1);
  for (int64_t i = static_cast<int64_t>(shape.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * shape[i + 1];
  return s;
}

int64_t shape_size(const Shape& shape) {
  int64_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::string s = "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

static void check_shape(const Shape& shape) {
  for (auto d : shape)
    if (d < 1) throw std::invalid_argument("tensor dimensions must be positive, got " + shape_string(shape));
}

namespace {

// Visit src (strided) in logical row-major order, calling f(offset) for each element.
template <class F>
void for_each_offset(const Shape& shape, const std::vector<int64_t>& strides, F&& f) {
  const size_t r = shape.size();
  if (r == 0) {
    f(int64_t{0});
    return;
  }
  for (auto d : shape)
    if (d == 0) return;
  std::vector<int64_t> idx(r, 0);
  int64_t off = 0;
  const int64_t inner = shape[r - 1];
  const int64_t istride = strides[r - 1];
  while (true) {
    for (int64_t k = 0; k < inner; ++k) f(off + k * istride);
    int64_t ax = static_cast<int64_t>(r) - 2;
    while (ax >= 0) {
      idx[ax]++;
      off += strides[ax];
      if (idx[ax] < shape[ax]) break;
      off -= strides[ax] * shape[ax];
      idx[ax] = 0;
      --ax;
    }
    if (ax < 0) return;
  }
}

template <class T>
std::vector<T> gather(const std::vector<T>& src, const Shape& shape, const std::vector<int64_t>& strides) {
  std::vector<T> out;
  out.reserve(static_cast<size_t>(shape_size(shape)));
  for_each_offset(shape, strides, [&](int64_t o) { out.push_back(src[static_cast<size_t>(o)]); });
  return out;
}

}  // namespace

DenseTensor::DenseTensor(const Shape& shape, DType dtype)
    : DenseTensor(shape, Storage(dtype, static_cast<size_t>(shape_size(shape)))) {}

DenseTensor::DenseTensor(const Shape& shape, Storage storage) {
  check_shape(shape);
  if (static_cast<int64_t>(storage.size()) != shape_size(shape))
    throw std::invalid_argument("storage size does not match shape " + shape_string(shape));
  impl_ = std::make_shared<Impl>();
  impl_->shape = shape;
  impl_->mapper.resize(shape.size());
  std::iota(impl_->mapper.begin(), impl_->mapper.end(), 0);
  impl_->strides = row_major_strides(shape);
  impl_->storage = std::make_shared<Storage>(std::move(storage));
}

DenseTensor DenseTensor::zeros(const Shape& shape, DType dtype) { return DenseTensor(shape, dtype); }

DenseTensor DenseTensor::ones(const Shape& shape, DType dtype) { return full(shape, Scalar(1.0), dtype); }

DenseTensor DenseTensor::full(const Shape& shape, const Scalar& value, DType dtype) {
  DenseTensor t(shape, dtype);
  std::visit(
      [&](auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        std::fill(v.begin(), v.end(), value.as<T>());
      },
      t.storage()->data());
  return t;
}

DenseTensor DenseTensor::arange(int64_t n, DType dtype) {
  if (n < 1) throw std::invalid_argument("arange needs n >= 1");
  return arange(0.0, static_cast<double>(n), 1.0, dtype);
}

DenseTensor DenseTensor::arange(double start, double stop, double step, DType dtype) {
  if (step == 0.0) throw std::invalid_argument("arange step must be nonzero");
  int64_t n = static_cast<int64_t>(std::ceil((stop - start) / step));
  if (n < 1) throw std::invalid_argument("arange produces no elements");
  std::vector<double> v(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
  return from_vector(v, {n}).astype(dtype);
}

DenseTensor DenseTensor::eye(int64_t n, DType dtype) {
  DenseTensor t({n, n}, dtype);
  for (int64_t i = 0; i < n; ++i) t.set({i, i}, Scalar(1.0));
  return t;
}

static uint64_t draw_seed(std::optional<uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

DenseTensor DenseTensor::uniform(const Shape& shape, double low, double high, std::optional<uint64_t> seed,
                                 DType dtype) {
  if (!(low < high)) throw std::invalid_argument("uniform needs low < high");
  check_shape(shape);
  std::mt19937_64 gen(draw_seed(seed));
  std::uniform_real_distribution<double> dist(low, high);
  const size_t n = static_cast<size_t>(shape_size(shape));
  if (dtype == DType::Complex128) {
    std::vector<cplx> v(n);
    for (auto& x : v) {
      double re = dist(gen);
      double im = dist(gen);
      x = cplx(re, im);
    }
    return from_vector(v, shape);
  }
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return from_vector(v, shape).astype(dtype);
}

DenseTensor DenseTensor::normal(const Shape& shape, double mean, double stddev, std::optional<uint64_t> seed,
                                DType dtype) {
  if (stddev < 0) throw std::invalid_argument("normal needs stddev >= 0");
  check_shape(shape);
  std::mt19937_64 gen(draw_seed(seed));
  std::normal_distribution<double> dist(mean, stddev);
  const size_t n = static_cast<size_t>(shape_size(shape));
  if (dtype == DType::Complex128) {
    std::vector<cplx> v(n);
    for (auto& x : v) {
      double re = dist(gen);
      double im = dist(gen);
      x = cplx(re, im);
    }
    return from_vector(v, shape);
  }
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return from_vector(v, shape).astype(dtype);
}

int64_t DenseTensor::size() const { return shape_size(impl().shape); }

bool DenseTensor::is_contiguous() const {
  const auto& m = impl().mapper;
  for (size_t i = 0; i < m.size(); ++i)
    if (m[i] != static_cast<int64_t>(i)) return false;
  return true;
}

static void check_perm(const std::vector<int64_t>& order, size_t r) {
  if (order.size() != r) throw std::invalid_argument("permutation length does not match rank");
  std::vector<bool> seen(r, false);
  for (auto o : order) {
    if (o < 0 || o >= static_cast<int64_t>(r) || seen[o]) throw std::invalid_argument("invalid permutation");
    seen[o] = true;
  }
}

DenseTensor DenseTensor::permute(const std::vector<int64_t>& order) const {
  DenseTensor t = alias();
  t.permute_(order);
  return t;
}

DenseTensor& DenseTensor::permute_(const std::vector<int64_t>& order) {
  Impl& m = impl();
  check_perm(order, m.shape.size());
  Shape sh(order.size());
  std::vector<int64_t> mp(order.size()), st(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    sh[i] = m.shape[order[i]];
    mp[i] = m.mapper[order[i]];
    st[i] = m.strides[order[i]];
  }
  m.shape = std::move(sh);
  m.mapper = std::move(mp);
  m.strides = std::move(st);
  return *this;
}

DenseTensor DenseTensor::reshape(const Shape& shape) const {
  DenseTensor t = is_contiguous() ? alias() : contiguous();
  t.reshape_(shape);
  return t;
}

DenseTensor& DenseTensor::reshape_(const Shape& shape) {
  check_shape(shape);
  if (shape_size(shape) != size())
    throw std::invalid_argument("cannot reshape " + shape_string(impl().shape) + " to " + shape_string(shape));
  contiguous_();
  Impl& m = impl();
  m.shape = shape;
  m.mapper.resize(shape.size());
  std::iota(m.mapper.begin(), m.mapper.end(), 0);
  m.strides = row_major_strides(shape);
  return *this;
}

DenseTensor DenseTensor::contiguous() const {
  if (is_contiguous()) return *this;
  DenseTensor t = alias();
  t.contiguous_();
  return t;
}

DenseTensor& DenseTensor::contiguous_() {
  if (is_contiguous()) return *this;
  Impl& m = impl();
  Storage s = std::visit(
      [&](const auto& v) { return Storage(Storage::Data(gather(v, m.shape, m.strides))); }, m.storage->data());
  replace_storage(std::move(s));
  return *this;
}

void DenseTensor::replace_storage(Storage s) {
  Impl& m = impl();
  m.storage = std::make_shared<Storage>(std::move(s));
  std::iota(m.mapper.begin(), m.mapper.end(), 0);
  m.strides = row_major_strides(m.shape);
}

DenseTensor DenseTensor::clone() const {
  const Impl& m = impl();
  Storage s = std::visit(
      [&](const auto& v) { return Storage(Storage::Data(gather(v, m.shape, m.strides))); }, m.storage->data());
  return DenseTensor(m.shape, std::move(s));
}

DenseTensor DenseTensor::astype(DType dtype) const {
  if (dtype == this->dtype()) return *this;
  DenseTensor c = contiguous();
  return DenseTensor(c.shape(), c.storage()->astype(dtype));
}

DenseTensor DenseTensor::alias() const {
  DenseTensor t;
  t.impl_ = std::make_shared<Impl>(impl());
  return t;
}

int64_t DenseTensor::offset(const std::vector<int64_t>& idx) const {
  const Impl& m = impl();
  if (idx.size() != m.shape.size()) {
    // A rank-0 tensor also accepts the single index 0.
    if (m.shape.empty() && idx.size() == 1 && idx[0] == 0) return 0;
    throw std::invalid_argument("expected " + std::to_string(m.shape.size()) + " indices, got " +
                                std::to_string(idx.size()));
  }
  int64_t off = 0;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= m.shape[i])
      throw std::out_of_range("index " + std::to_string(idx[i]) + " out of range for axis " + std::to_string(i) +
                              " of size " + std::to_string(m.shape[i]));
    off += idx[i] * m.strides[i];
  }
  return off;
}

Scalar DenseTensor::get(const std::vector<int64_t>& idx) const {
  return impl().storage->get(static_cast<size_t>(offset(idx)));
}

void DenseTensor::set(const std::vector<int64_t>& idx, const Scalar& v) {
  impl().storage->set(static_cast<size_t>(offset(idx)), v);
}

Scalar DenseTensor::item() const {
  if (size() != 1) throw std::invalid_argument("item() needs a one-element tensor");
  return impl().storage->get(0);
}

namespace {

struct SliceView {
  Shape shape;        // extents of every axis (1 for single-index axes)
  Shape kept_shape;   // shape with single-index axes dropped
  int64_t base = 0;   // storage offset of the first element
};

SliceView resolve(const Shape& shape, const std::vector<int64_t>& strides, const std::vector<Slice>& slices) {
  if (slices.size() > shape.size()) throw std::invalid_argument("too many slice entries");
  SliceView v;
  for (size_t i = 0; i < shape.size(); ++i) {
    Slice s = i < slices.size() ? slices[i] : Slice::all();
    int64_t a = 0, b = shape[i];
    if (s.kind != Slice::Kind::All) {
      a = s.start;
      b = s.stop;
    }
    if (a < 0 || b > shape[i] || a >= b)
      throw std::out_of_range("slice [" + std::to_string(a) + "," + std::to_string(b) + ") invalid for axis " +
                              std::to_string(i) + " of size " + std::to_string(shape[i]));
    v.shape.push_back(b - a);
    if (s.kind != Slice::Kind::Index) v.kept_shape.push_back(b - a);
    v.base += a * strides[i];
  }
  if (v.kept_shape.empty()) v.kept_shape.push_back(1);
  return v;
}

}  // namespace

DenseTensor DenseTensor::get(const std::vector<Slice>& slices) const {
  const Impl& m = impl();
  SliceView sv = resolve(m.shape, m.strides, slices);
  Storage s = std::visit(
      [&](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        std::vector<T> out;
        out.reserve(static_cast<size_t>(shape_size(sv.shape)));
        for_each_offset(sv.shape, m.strides, [&](int64_t o) { out.push_back(v[static_cast<size_t>(sv.base + o)]); });
        return Storage(Storage::Data(std::move(out)));
      },
      m.storage->data());
  return DenseTensor(sv.kept_shape, std::move(s));
}

void DenseTensor::set(const std::vector<Slice>& slices, const DenseTensor& src) {
  Impl& m = impl();
  SliceView sv = resolve(m.shape, m.strides, slices);
  if (src.shape() != sv.kept_shape && src.shape() != sv.shape)
    throw std::invalid_argument("slice assignment shape mismatch: slice is " + shape_string(sv.kept_shape) +
                                ", source is " + shape_string(src.shape()));
  if (promote(dtype(), src.dtype()) != dtype() && src.dtype() == DType::Complex128)
    throw std::invalid_argument("cannot assign complex values into a real tensor");
  DenseTensor c = src.contiguous().astype(dtype());
  std::visit(
      [&](auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        const auto& sv2 = c.storage()->template vec<T>();
        size_t k = 0;
        for_each_offset(sv.shape, m.strides, [&](int64_t o) { v[static_cast<size_t>(sv.base + o)] = sv2[k++]; });
      },
      m.storage->data());
}

void DenseTensor::set(const std::vector<Slice>& slices, const Scalar& x) {
  Impl& m = impl();
  SliceView sv = resolve(m.shape, m.strides, slices);
  for_each_offset(sv.shape, m.strides, [&](int64_t o) { m.storage->set(static_cast<size_t>(sv.base + o), x); });
}

// ---- arithmetic ----

namespace {

enum class Op { Add, Sub, Mul, Div };

template <class T>
T apply(Op op, const T& a, const T& b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
  }
  return a;
}

DType result_type(Op op, DType a, DType b) {
  if (op == Op::Div) return promote_div(a, b);
  DType t = promote(a, b);
  return t == DType::Bool ? DType::Int64 : t;
}

// out[i] = a[i] op b[i], both already contiguous and of type T.
template <class T>
void binary_loop(Op op, std::vector<T>& out, const std::vector<T>& a, const std::vector<T>& b) {
  for (size_t i = 0; i < out.size(); ++i) out[i] = apply(op, a[i], b[i]);
}

DenseTensor binary(Op op, const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape())
    throw std::invalid_argument("elementwise operation on mismatched shapes " + shape_string(a.shape()) + " and " +
                                shape_string(b.shape()));
  DType t = result_type(op, a.dtype(), b.dtype());
  DenseTensor ca = a.contiguous().astype(t);
  DenseTensor cb = b.contiguous().astype(t);
  DenseTensor out(a.shape(), t);
  std::visit(
      [&](auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        binary_loop<T>(op, v, ca.storage()->template vec<T>(), cb.storage()->template vec<T>());
      },
      out.storage()->data());
  return out;
}

DenseTensor binary_scalar(Op op, const DenseTensor& a, const Scalar& s, bool scalar_left) {
  DType t = result_type(op, a.dtype(), s.dtype());
  DenseTensor ca = a.contiguous().astype(t);
  DenseTensor out(a.shape(), t);
  std::visit(
      [&](auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        const auto& in = ca.storage()->template vec<T>();
        const T x = s.as<T>();
        if (scalar_left)
          for (size_t i = 0; i < v.size(); ++i) v[i] = apply(op, x, in[i]);
        else
          for (size_t i = 0; i < v.size(); ++i) v[i] = apply(op, in[i], x);
      },
      out.storage()->data());
  return out;
}

}  // namespace

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) { return binary(Op::Add, a, b); }
DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) { return binary(Op::Sub, a, b); }
DenseTensor operator*(const DenseTensor& a, const DenseTensor& b) { return binary(Op::Mul, a, b); }
DenseTensor operator/(const DenseTensor& a, const DenseTensor& b) { return binary(Op::Div, a, b); }
DenseTensor operator+(const DenseTensor& a, const Scalar& s) { return binary_scalar(Op::Add, a, s, false); }
DenseTensor operator-(const DenseTensor& a, const Scalar& s) { return binary_scalar(Op::Sub, a, s, false); }
DenseTensor operator*(const DenseTensor& a, const Scalar& s) { return binary_scalar(Op::Mul, a, s, false); }
DenseTensor operator/(const DenseTensor& a, const Scalar& s) { return binary_scalar(Op::Div, a, s, false); }
DenseTensor operator+(const Scalar& s, const DenseTensor& a) { return binary_scalar(Op::Add, a, s, true); }
DenseTensor operator-(const Scalar& s, const DenseTensor& a) { return binary_scalar(Op::Sub, a, s, true); }
DenseTensor operator*(const Scalar& s, const DenseTensor& a) { return binary_scalar(Op::Mul, a, s, true); }
DenseTensor operator/(const Scalar& s, const DenseTensor& a) { return binary_scalar(Op::Div, a, s, true); }
DenseTensor operator-(const DenseTensor& a) { return binary_scalar(Op::Mul, a, Scalar(int64_t{-1}), false); }

// In-place forms write into the existing storage when the dtype is unchanged,
// so every alias of the storage sees the update.
static void assign_inplace(DenseTensor& self, const DenseTensor& result) {
  if (result.dtype() == self.dtype()) {
    self.set(std::vector<Slice>{}, result);
  } else {
    DenseTensor r = result;
    self = r;
  }
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& o) { assign_inplace(*this, *this + o); return *this; }
DenseTensor& DenseTensor::operator-=(const DenseTensor& o) { assign_inplace(*this, *this - o); return *this; }
DenseTensor& DenseTensor::operator*=(const DenseTensor& o) { assign_inplace(*this, *this * o); return *this; }
DenseTensor& DenseTensor::operator/=(const DenseTensor& o) { assign_inplace(*this, *this / o); return *this; }
DenseTensor& DenseTensor::operator+=(const Scalar& s) { assign_inplace(*this, *this + s); return *this; }
DenseTensor& DenseTensor::operator-=(const Scalar& s) { assign_inplace(*this, *this - s); return *this; }
DenseTensor& DenseTensor::operator*=(const Scalar& s) { assign_inplace(*this, *this * s); return *this; }
DenseTensor& DenseTensor::operator/=(const Scalar& s) { assign_inplace(*this, *this / s); return *this; }

DenseTensor DenseTensor::Conj() const {
  DenseTensor c = clone();
  c.Conj_();
  return c;
}

DenseTensor& DenseTensor::Conj_() {
  if (dtype() == DType::Complex128)
    for (auto& x : impl().storage->vec<cplx>()) x = std::conj(x);
  return *this;
}

DenseTensor DenseTensor::Pow(double p) const {
  DenseTensor c = clone();
  c.Pow_(p);
  return c;
}

DenseTensor& DenseTensor::Pow_(double p) {
  if (dtype() == DType::Complex128) {
    for (auto& x : impl().storage->vec<cplx>()) x = std::pow(x, p);
    return *this;
  }
  if (dtype() != DType::Float64) {
    DenseTensor f = astype(DType::Float64);
    replace_storage(std::move(*f.storage()));
  }
  for (auto& x : impl().storage->vec<double>()) x = std::pow(x, p);
  return *this;
}

double DenseTensor::Norm() const {
  double s = 0.0;
  std::visit(
      [&](const auto& v) {
        for_each_offset(impl().shape, impl().strides, [&](int64_t o) {
          using T = typename std::decay_t<decltype(v)>::value_type;
          if constexpr (std::is_same_v<T, cplx>) s += std::norm(v[static_cast<size_t>(o)]);
          else {
            double x = static_cast<double>(v[static_cast<size_t>(o)]);
            s += x * x;
          }
        });
      },
      impl().storage->data());
  return std::sqrt(s);
}

DenseTensor Kron(const DenseTensor& a, const DenseTensor& b) {
  if (a.rank() != 2 || b.rank() != 2) throw std::invalid_argument("Kron needs two matrices");
  const int64_t m = a.shape()[0], n = a.shape()[1], p = b.shape()[0], q = b.shape()[1];
  DType t = promote(a.dtype(), b.dtype());
  if (t == DType::Bool) t = DType::Int64;
  DenseTensor A = a.contiguous().astype(t), B = b.contiguous().astype(t);
  DenseTensor K({m * p, n * q}, t);
  std::visit(
      [&](auto& kv) {
        using T = typename std::decay_t<decltype(kv)>::value_type;
        const auto& av = A.storage()->template vec<T>();
        const auto& bv = B.storage()->template vec<T>();
        for (int64_t i = 0; i < m; ++i)
          for (int64_t j = 0; j < n; ++j)
            for (int64_t k = 0; k < p; ++k)
              for (int64_t l = 0; l < q; ++l)
                kv[(i * p + k) * (n * q) + j * q + l] = av[i * n + j] * bv[k * q + l];
      },
      K.storage()->data());
  return K;
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape())
    throw std::invalid_argument("max_abs_diff on mismatched shapes " + shape_string(a.shape()) + " and " +
                                shape_string(b.shape()));
  auto x = a.to_vector<cplx>();
  auto y = b.to_vector<cplx>();
  double m = 0.0;
  for (size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

// ---- printing ----

namespace {

void print_elem(std::ostream& os, const Scalar& s) {
  char buf[64];
  switch (s.dtype()) {
    case DType::Bool: os << (s.to_bool() ? " True" : "False"); return;
    case DType::Int64: std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(s.to_int64())); break;
    case DType::Float64: std::snprintf(buf, sizeof buf, "%.5e", s.real()); break;
    case DType::Complex128: std::snprintf(buf, sizeof buf, "%.5e%+.5ej", s.real(), s.imag()); break;
  }
  os << buf;
}

void print_rec(std::ostream& os, const DenseTensor& t, std::vector<int64_t>& idx, size_t ax) {
  const auto& sh = t.shape();
  os << "[";
  for (int64_t i = 0; i < sh[ax]; ++i) {
    idx[ax] = i;
    if (ax + 1 == sh.size()) {
      print_elem(os, t.get(idx));
      os << " ";
    } else {
      if (i > 0) os << std::string(ax + 1, ' ');
      print_rec(os, t, idx, ax + 1);
      if (i + 1 < sh[ax]) os << "\n";
    }
  }
  os << "]";
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const DenseTensor& t) {
  if (!t.defined()) return os << "<null tensor>\n";
  os << "Total elem: " << t.size() << "\n";
  os << "type  : " << to_string(t.dtype()) << "\n";
  os << "device: CPU\n";
  os << "Shape : " << shape_string(t.shape()) << "\n";
  if (t.rank() == 0) {
    os << "[";
    print_elem(os, t.item());
    os << " ]\n";
    return os;
  }
  std::vector<int64_t> idx(t.shape().size(), 0);
  print_rec(os, t, idx, 0);
  return os << "\n";
}

}  // namespace tnx
