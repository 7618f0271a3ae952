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

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tnx/contract.hpp"
#include "tnx/unitensor.hpp"

namespace tnx {

/// Reusable contraction blueprint read from the .net format:
///
///     # comment
///     NAME: label, label, ...
///     TOUT: row labels ; column labels
///     ORDER: ((A,B),C)
///
/// Each label appears on one slot (then it must be listed in TOUT) or on two
/// slots (then it is summed). Without ";" in TOUT the first label is the row
/// label when there are two or more labels. An empty ORDER means the slots are
/// contracted left to right in the order they were declared.
class Network {
 public:
  Network() = default;
  /// Reads a .net file.
  explicit Network(const std::string& path);

  static Network from_string(const std::vector<std::string>& lines);
  static Network from_string(const std::string& text);
  static Network from_file(const std::string& path);
  /// Writes the blueprint; ".net" is appended if path lacks it. Returns the path written.
  std::string save_file(const std::string& path) const;
  /// The blueprint in .net syntax.
  std::string to_net() const;

  /// Binds t to a slot. label_map lists t's labels in the slot's label order;
  /// empty means t's own label order. The tensor is held by handle, not copied.
  void put_tensor(const std::string& slot, const UniTensor& t, const std::vector<std::string>& label_map = {});
  /// optimal: search a fresh order at every launch. Otherwise a non-empty order
  /// replaces the stored one and an empty order keeps it.
  void set_order(bool optimal, const std::string& order = "");
  /// The stored order, or the default left fold when none is stored.
  std::string get_order() const;
  bool optimal() const { return optimal_; }

  /// Contracts the bound tensors. The result follows TOUT: labels in TOUT order,
  /// rowrank = number of row labels. A network without free labels yields rank 0.
  UniTensor launch();

  const std::vector<std::string>& slot_names() const { return names_; }
  const std::vector<std::string>& slot_labels(const std::string& slot) const;
  bool is_bound(const std::string& slot) const;
  const std::vector<std::string>& tout_row() const { return tout_row_; }
  const std::vector<std::string>& tout_col() const { return tout_col_; }
  /// Dimension of each abstract label as implied by the bound tensors.
  CostModel bound_dims() const;

  /// Blueprint equality: slots, TOUT and stored order (bindings are ignored).
  bool operator==(const Network& o) const;

 private:
  struct Binding {
    UniTensor tensor;
    std::vector<std::string> map;  // tensor label for each abstract label
  };
  size_t slot_index(const std::string& slot) const;
  std::vector<UniTensor> prepared() const;

  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::string> tout_row_, tout_col_;
  ContractionTree order_;
  bool optimal_ = false;
  std::map<std::string, Binding> bound_;
};

/// "==== Network ====" listing of slots, TOUT and ORDER.
std::ostream& operator<<(std::ostream& os, const Network& net);

}  // namespace tnx
