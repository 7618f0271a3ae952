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

#include <istream>
#include <ostream>
#include <string>

#include "tnx/unitensor.hpp"

namespace tnx {

/// Current version of the binary tensor format (see README).
inline constexpr uint32_t kFormatVersion = 1;

void save(const UniTensor& t, std::ostream& os);
UniTensor load(std::istream& is);
void save_file(const UniTensor& t, const std::string& path);
UniTensor load_file(const std::string& path);

}  // namespace tnx
