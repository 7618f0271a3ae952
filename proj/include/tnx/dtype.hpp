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

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <type_traits>
#include <variant>

namespace tnx {

using cplx = std::complex<double>;

/// Element types. The numeric order doubles as the promotion order.
enum class DType : uint8_t { Bool = 0, Int64 = 1, Float64 = 2, Complex128 = 3 };

std::string to_string(DType t);
/// Result type of +, -, *.
DType promote(DType a, DType b);
/// Result type of /: like promote but never below Float64.
DType promote_div(DType a, DType b);
/// Type used by matrix kernels (Float64 or Complex128).
inline DType numeric_type(DType t) { return t == DType::Complex128 ? DType::Complex128 : DType::Float64; }

// Storage element type for each dtype. Bool is kept as one byte per element.
template <DType D> struct ctype;
template <> struct ctype<DType::Bool> { using type = uint8_t; };
template <> struct ctype<DType::Int64> { using type = int64_t; };
template <> struct ctype<DType::Float64> { using type = double; };
template <> struct ctype<DType::Complex128> { using type = cplx; };

template <class T> constexpr DType dtype_of();
template <> constexpr DType dtype_of<uint8_t>() { return DType::Bool; }
template <> constexpr DType dtype_of<int64_t>() { return DType::Int64; }
template <> constexpr DType dtype_of<double>() { return DType::Float64; }
template <> constexpr DType dtype_of<cplx>() { return DType::Complex128; }

/// A single element value tagged with its dtype.
class Scalar {
 public:
  Scalar() : v_(0.0) {}
  Scalar(bool b) : v_(b) {}
  template <class I, std::enable_if_t<std::is_integral_v<I> && !std::is_same_v<I, bool>, int> = 0>
  Scalar(I i) : v_(static_cast<int64_t>(i)) {}
  Scalar(double d) : v_(d) {}
  Scalar(cplx c) : v_(c) {}

  DType dtype() const { return static_cast<DType>(v_.index()); }
  double real() const;
  double imag() const;
  cplx to_complex() const;
  int64_t to_int64() const;
  bool to_bool() const;
  /// Convert to a storage element type.
  template <class T> T as() const;
  Scalar astype(DType t) const;

  bool operator==(const Scalar& o) const { return to_complex() == o.to_complex(); }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

 private:
  std::variant<bool, int64_t, double, cplx> v_;
};

template <> inline uint8_t Scalar::as<uint8_t>() const { return to_bool() ? 1 : 0; }
template <> inline int64_t Scalar::as<int64_t>() const { return to_int64(); }
template <> inline double Scalar::as<double>() const { return real(); }
template <> inline cplx Scalar::as<cplx>() const { return to_complex(); }

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace tnx
