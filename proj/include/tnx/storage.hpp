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

#include <cstddef>
#include <memory>
#include <ostream>
#include <variant>
#include <vector>

#include "tnx/dtype.hpp"

namespace tnx {

/// Flat typed element buffer. Tensors share a Storage through shared_ptr.
class Storage {
 public:
  // Variant index equals the DType value.
  using Data = std::variant<std::vector<uint8_t>, std::vector<int64_t>, std::vector<double>,
                            std::vector<cplx>>;

  Storage() : data_(std::vector<double>{}) {}
  /// Zero-filled buffer.
  Storage(DType dtype, size_t n);
  explicit Storage(Data d) : data_(std::move(d)) {}

  DType dtype() const { return static_cast<DType>(data_.index()); }
  size_t size() const;
  Data& data() { return data_; }
  const Data& data() const { return data_; }

  template <class T> std::vector<T>& vec() { return std::get<std::vector<T>>(data_); }
  template <class T> const std::vector<T>& vec() const { return std::get<std::vector<T>>(data_); }

  Scalar get(size_t i) const;
  void set(size_t i, const Scalar& v);
  Storage astype(DType t) const;

 private:
  Data data_;
};

/// Prints "[ e0 e1 ... ]".
std::ostream& operator<<(std::ostream& os, const Storage& s);

}  // namespace tnx
