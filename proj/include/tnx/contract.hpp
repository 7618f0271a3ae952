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
#include <memory>
#include <string>
#include <vector>

#include "tnx/unitensor.hpp"

namespace tnx {

/// Binary contraction tree over tensor names, written as "((A,B),C)".
class ContractionTree {
 public:
  ContractionTree() = default;
  static ContractionTree leaf(const std::string& name);
  static ContractionTree join(const ContractionTree& left, const ContractionTree& right);
  /// Parses name | "(" tree "," tree ")"; whitespace is ignored.
  static ContractionTree parse(const std::string& text);

  bool empty() const { return !node_; }
  bool is_leaf() const { return node_ && !node_->left; }
  const std::string& name() const { return node_->name; }
  ContractionTree left() const { return ContractionTree(node_->left); }
  ContractionTree right() const { return ContractionTree(node_->right); }
  /// Leaf names, left to right.
  std::vector<std::string> leaves() const;
  std::string str() const;

 private:
  struct Node {
    std::string name;
    std::shared_ptr<const Node> left, right;
  };
  explicit ContractionTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// True if s is a valid tensor or label name: [A-Za-z0-9_*'+-]+.
bool is_valid_name(const std::string& s);

/// Label -> dimension map used for order search.
using CostModel = std::map<std::string, int64_t>;

struct OrderResult {
  ContractionTree tree;
  double cost = 0.0;  // total number of scalar multiplications
};

/// Minimum-cost contraction tree by dynamic programming over subsets with a
/// cost cap. Ties go to the lexicographically smallest tree string.
OrderResult find_optimal_order(const std::vector<std::string>& names,
                               const std::vector<std::vector<std::string>>& labels, const CostModel& dims);
/// Cost of contracting along a given tree.
double tree_cost(const ContractionTree& tree, const std::vector<std::string>& names,
                 const std::vector<std::vector<std::string>>& labels, const CostModel& dims);

/// Sums over all labels shared by a and b. Result labels: a's free labels in
/// a's order, then b's. A scalar result is a rank-0 tensor.
UniTensor Contract(const UniTensor& a, const UniTensor& b);

/// Contracts a list of tensors. An explicit order (tree over tensor names) wins;
/// otherwise optimal=true searches for the cheapest order and optimal=false
/// folds left in list order.
UniTensor Contract(const std::vector<UniTensor>& tensors, const std::string& order = "", bool optimal = true);

}  // namespace tnx
