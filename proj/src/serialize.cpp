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

#include "tnx/serialize.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tnx {

namespace {

constexpr std::array<char, 5> kMagic{'T', 'N', 'X', 'U', '\0'};

// Fixed-width little-endian fields.
template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw std::runtime_error("tensor file is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

void put_str(std::ostream& os, const std::string& s) {
  put<uint64_t>(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_str(std::istream& is) {
  const auto n = get<uint64_t>(is);
  if (n > (uint64_t{1} << 20)) throw std::runtime_error("tensor file has an implausible string length");
  std::string s(n, '\0');
  if (!is.read(s.data(), static_cast<std::streamsize>(n))) throw std::runtime_error("tensor file is truncated");
  return s;
}

uint64_t get_count(std::istream& is, uint64_t limit, const char* what) {
  const auto n = get<uint64_t>(is);
  if (n > limit) throw std::runtime_error(std::string("tensor file has an implausible ") + what);
  return n;
}

}  // namespace

void save(const UniTensor& t, std::ostream& os) {
  os.write(kMagic.data(), kMagic.size());
  put<uint32_t>(os, kFormatVersion);
  put_str(os, t.name());
  put<uint64_t>(os, static_cast<uint64_t>(t.rank()));
  for (const auto& l : t.labels()) put_str(os, l);
  put<int64_t>(os, t.rowrank());
  put<uint8_t>(os, t.is_symmetric() ? 1 : 0);
  put<uint8_t>(os, static_cast<uint8_t>(t.dtype()));
  for (const auto& b : t.bonds()) {
    put<uint8_t>(os, static_cast<uint8_t>(b.type()));
    put<int64_t>(os, b.dim());
    put<uint64_t>(os, b.syms().size());
    for (const auto& s : b.syms()) put_str(os, s.name());
    put<uint64_t>(os, b.num_sectors());
    for (const auto& sec : b.sectors()) {
      for (auto q : sec.qn) put<int64_t>(os, q);
      put<int64_t>(os, sec.deg);
    }
  }
  put<uint64_t>(os, static_cast<uint64_t>(t.Nblocks()));
  for (int64_t k = 0; k < t.Nblocks(); ++k) {
    if (t.is_symmetric())
      for (auto q : t.qn_indices(k)) put<int64_t>(os, q);
    const DenseTensor b = t.block(k).contiguous();
    put<uint64_t>(os, b.shape().size());
    for (auto d : b.shape()) put<int64_t>(os, d);
    switch (t.dtype()) {
      case DType::Bool:
        for (auto v : b.to_vector<uint8_t>()) put<uint8_t>(os, v);
        break;
      case DType::Int64:
        for (auto v : b.to_vector<int64_t>()) put<int64_t>(os, v);
        break;
      case DType::Float64:
        for (auto v : b.to_vector<double>()) put<double>(os, v);
        break;
      case DType::Complex128:
        for (auto v : b.to_vector<cplx>()) {
          put<double>(os, v.real());
          put<double>(os, v.imag());
        }
        break;
    }
  }
  if (!os) throw std::runtime_error("failed to write tensor");
}

UniTensor load(std::istream& is) {
  std::array<char, 5> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw std::runtime_error("not a tensor file (bad magic)");
  const auto version = get<uint32_t>(is);
  if (version != kFormatVersion)
    throw std::runtime_error("unsupported tensor file version " + std::to_string(version));
  const std::string name = get_str(is);
  const auto rank = get_count(is, 1024, "rank");
  std::vector<std::string> labels;
  for (uint64_t i = 0; i < rank; ++i) labels.push_back(get_str(is));
  const auto rowrank = get<int64_t>(is);
  const bool symmetric = get<uint8_t>(is) != 0;
  const auto dt_raw = get<uint8_t>(is);
  if (dt_raw > static_cast<uint8_t>(DType::Complex128)) throw std::runtime_error("tensor file has an unknown dtype");
  const auto dt = static_cast<DType>(dt_raw);
  std::vector<Bond> bonds;
  for (uint64_t i = 0; i < rank; ++i) {
    const auto type_raw = get<uint8_t>(is);
    if (type_raw > 2) throw std::runtime_error("tensor file has an unknown bond type");
    const auto type = static_cast<BondType>(type_raw);
    const auto dim = get<int64_t>(is);
    const auto nsyms = get_count(is, 64, "symmetry count");
    std::vector<Symmetry> syms;
    for (uint64_t s = 0; s < nsyms; ++s) syms.push_back(Symmetry::from_name(get_str(is)));
    const auto nsec = get_count(is, uint64_t{1} << 24, "sector count");
    std::vector<Sector> sectors;
    for (uint64_t s = 0; s < nsec; ++s) {
      Qn q;
      for (uint64_t j = 0; j < nsyms; ++j) q.push_back(get<int64_t>(is));
      sectors.push_back({q, get<int64_t>(is)});
    }
    if (nsec == 0) {
      bonds.emplace_back(dim, type);
    } else {
      bonds.emplace_back(type, sectors, syms);
      if (bonds.back().dim() != dim) throw std::runtime_error("tensor file bond dimension disagrees with its sectors");
    }
  }
  const auto nblocks = get_count(is, uint64_t{1} << 24, "block count");
  std::vector<DenseTensor> blocks;
  std::vector<std::vector<int64_t>> qis;
  for (uint64_t k = 0; k < nblocks; ++k) {
    if (symmetric) {
      std::vector<int64_t> qi;
      for (uint64_t i = 0; i < rank; ++i) qi.push_back(get<int64_t>(is));
      qis.push_back(std::move(qi));
    }
    const auto brank = get_count(is, 1024, "block rank");
    Shape shape;
    for (uint64_t i = 0; i < brank; ++i) {
      shape.push_back(get<int64_t>(is));
      if (shape.back() < 0) throw std::runtime_error("tensor file has a negative extent");
    }
    const auto n = static_cast<size_t>(shape_size(shape));
    switch (dt) {
      case DType::Bool: {
        std::vector<uint8_t> v(n);
        for (auto& x : v) x = get<uint8_t>(is);
        blocks.push_back(DenseTensor::from_vector(v, shape));
        break;
      }
      case DType::Int64: {
        std::vector<int64_t> v(n);
        for (auto& x : v) x = get<int64_t>(is);
        blocks.push_back(DenseTensor::from_vector(v, shape));
        break;
      }
      case DType::Float64: {
        std::vector<double> v(n);
        for (auto& x : v) x = get<double>(is);
        blocks.push_back(DenseTensor::from_vector(v, shape));
        break;
      }
      case DType::Complex128: {
        std::vector<cplx> v(n);
        for (auto& x : v) {
          const double re = get<double>(is);
          x = cplx(re, get<double>(is));
        }
        blocks.push_back(DenseTensor::from_vector(v, shape));
        break;
      }
    }
  }
  if (!symmetric) qis.clear();
  UniTensor t = UniTensor::from_blocks(bonds, labels, rowrank, std::move(blocks), std::move(qis), name);
  if (symmetric && !t.is_symmetric()) throw std::runtime_error("tensor file symmetric flag disagrees with its bonds");
  return t;
}

void save_file(const UniTensor& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  save(t, os);
}

UniTensor load_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return load(is);
}

}  // namespace tnx
