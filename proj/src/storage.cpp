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

#include "tnx/storage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tnx {

std::string to_string(DType t) {
  switch (t) {
    case DType::Bool: return "Bool";
    case DType::Int64: return "Int64";
    case DType::Float64: return "Double (Float64)";
    case DType::Complex128: return "Complex Double (Complex Float64)";
  }
  return "?";
}

DType promote(DType a, DType b) { return std::max(a, b); }

DType promote_div(DType a, DType b) { return std::max({a, b, DType::Float64}); }

double Scalar::real() const {
  switch (v_.index()) {
    case 0: return std::get<bool>(v_) ? 1.0 : 0.0;
    case 1: return static_cast<double>(std::get<int64_t>(v_));
    case 2: return std::get<double>(v_);
    default: return std::get<cplx>(v_).real();
  }
}

double Scalar::imag() const { return v_.index() == 3 ? std::get<cplx>(v_).imag() : 0.0; }

cplx Scalar::to_complex() const { return v_.index() == 3 ? std::get<cplx>(v_) : cplx(real(), 0.0); }

int64_t Scalar::to_int64() const {
  switch (v_.index()) {
    case 0: return std::get<bool>(v_) ? 1 : 0;
    case 1: return std::get<int64_t>(v_);
    default: return static_cast<int64_t>(real());
  }
}

bool Scalar::to_bool() const {
  switch (v_.index()) {
    case 0: return std::get<bool>(v_);
    case 1: return std::get<int64_t>(v_) != 0;
    case 2: return std::get<double>(v_) != 0.0;
    default: return std::get<cplx>(v_) != cplx(0.0, 0.0);
  }
}

Scalar Scalar::astype(DType t) const {
  switch (t) {
    case DType::Bool: return Scalar(to_bool());
    case DType::Int64: return Scalar(to_int64());
    case DType::Float64: return Scalar(real());
    case DType::Complex128: return Scalar(to_complex());
  }
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
  switch (s.dtype()) {
    case DType::Bool: return os << (s.to_bool() ? "True" : "False");
    case DType::Int64: return os << s.to_int64();
    case DType::Float64: return os << s.real();
    case DType::Complex128: return os << s.to_complex();
  }
  return os;
}

Storage::Storage(DType dtype, size_t n) {
  switch (dtype) {
    case DType::Bool: data_ = std::vector<uint8_t>(n, 0); break;
    case DType::Int64: data_ = std::vector<int64_t>(n, 0); break;
    case DType::Float64: data_ = std::vector<double>(n, 0.0); break;
    case DType::Complex128: data_ = std::vector<cplx>(n, cplx(0.0, 0.0)); break;
  }
}

size_t Storage::size() const {
  return std::visit([](const auto& v) { return v.size(); }, data_);
}

Scalar Storage::get(size_t i) const {
  return std::visit(
      [i](const auto& v) -> Scalar {
        using T = typename std::decay_t<decltype(v)>::value_type;
        if constexpr (std::is_same_v<T, uint8_t>) return Scalar(v.at(i) != 0);
        else return Scalar(v.at(i));
      },
      data_);
}

void Storage::set(size_t i, const Scalar& x) {
  std::visit(
      [&](auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        if (x.dtype() == DType::Complex128 && !std::is_same_v<T, cplx> && x.imag() != 0.0)
          throw std::invalid_argument("cannot store a complex value in a real tensor");
        v.at(i) = x.as<T>();
      },
      data_);
}

namespace {

template <class To, class From>
To convert_elem(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<From, cplx>) {
    if constexpr (std::is_same_v<To, uint8_t>) return x != cplx(0.0, 0.0) ? 1 : 0;
    else return static_cast<To>(x.real());
  } else if constexpr (std::is_same_v<To, uint8_t>) {
    return x != From(0) ? 1 : 0;
  } else if constexpr (std::is_same_v<To, cplx>) {
    return cplx(static_cast<double>(x), 0.0);
  } else {
    return static_cast<To>(x);
  }
}

template <class To>
std::vector<To> convert_vec(const Storage::Data& d) {
  return std::visit(
      [](const auto& v) {
        std::vector<To> out(v.size());
        for (size_t i = 0; i < v.size(); ++i) out[i] = convert_elem<To>(v[i]);
        return out;
      },
      d);
}

}  // namespace

Storage Storage::astype(DType t) const {
  switch (t) {
    case DType::Bool: return Storage(Data(convert_vec<uint8_t>(data_)));
    case DType::Int64: return Storage(Data(convert_vec<int64_t>(data_)));
    case DType::Float64: return Storage(Data(convert_vec<double>(data_)));
    case DType::Complex128: return Storage(Data(convert_vec<cplx>(data_)));
  }
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Storage& s) {
  os << "[ ";
  for (size_t i = 0; i < s.size(); ++i) os << s.get(i) << " ";
  return os << "]";
}

}  // namespace tnx
