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

#include "tnx/network.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tnx {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(size_t line, const std::string& what) {
  throw std::invalid_argument("network line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_labels(const std::string& text, size_t line) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string l = trim(item);
    if (!is_valid_name(l)) parse_error(line, "invalid label '" + l + "'");
    out.push_back(l);
  }
  if (!text.empty() && trim(text).back() == ',') parse_error(line, "trailing ','");
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

}  // namespace

Network::Network(const std::string& path) { *this = from_file(path); }

Network Network::from_string(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string l;
  while (std::getline(ss, l)) lines.push_back(l);
  return from_string(lines);
}

Network Network::from_string(const std::vector<std::string>& lines) {
  Network net;
  bool seen_tout = false, seen_order = false;
  std::string order_text;
  for (size_t n = 0; n < lines.size(); ++n) {
    std::string line = lines[n];
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) parse_error(n + 1, "expected 'NAME: labels'");
    const std::string key = trim(line.substr(0, colon));
    const std::string rest = line.substr(colon + 1);
    if (key == "TOUT") {
      if (seen_tout) parse_error(n + 1, "TOUT given twice");
      seen_tout = true;
      const auto semi = rest.find(';');
      if (semi == std::string::npos) {
        auto all = split_labels(rest, n + 1);
        if (all.size() >= 2) {
          net.tout_row_ = {all[0]};
          net.tout_col_.assign(all.begin() + 1, all.end());
        } else {
          net.tout_col_ = all;
        }
      } else {
        if (rest.find(';', semi + 1) != std::string::npos) parse_error(n + 1, "TOUT has more than one ';'");
        net.tout_row_ = split_labels(rest.substr(0, semi), n + 1);
        net.tout_col_ = split_labels(rest.substr(semi + 1), n + 1);
      }
    } else if (key == "ORDER") {
      if (seen_order) parse_error(n + 1, "ORDER given twice");
      seen_order = true;
      order_text = trim(rest);
      if (!order_text.empty()) {
        try {
          net.order_ = ContractionTree::parse(order_text);
        } catch (const std::invalid_argument& e) {
          parse_error(n + 1, e.what());
        }
      }
    } else {
      if (!is_valid_name(key)) parse_error(n + 1, "invalid tensor name '" + key + "'");
      if (std::find(net.names_.begin(), net.names_.end(), key) != net.names_.end())
        parse_error(n + 1, "duplicate tensor name '" + key + "'");
      auto labels = split_labels(rest, n + 1);
      if (labels.empty()) parse_error(n + 1, "tensor '" + key + "' has no labels");
      std::set<std::string> uniq(labels.begin(), labels.end());
      if (uniq.size() != labels.size()) parse_error(n + 1, "tensor '" + key + "' repeats a label");
      net.names_.push_back(key);
      net.labels_.push_back(std::move(labels));
    }
  }
  if (net.names_.empty()) throw std::invalid_argument("network declares no tensors");
  std::map<std::string, int> count;
  for (const auto& ls : net.labels_)
    for (const auto& l : ls) ++count[l];
  std::set<std::string> free;
  for (const auto& [l, c] : count) {
    if (c > 2) throw std::invalid_argument("label '" + l + "' appears on " + std::to_string(c) + " tensors");
    if (c == 1) free.insert(l);
  }
  std::vector<std::string> tout = net.tout_row_;
  tout.insert(tout.end(), net.tout_col_.begin(), net.tout_col_.end());
  std::set<std::string> tset(tout.begin(), tout.end());
  if (tset.size() != tout.size()) throw std::invalid_argument("TOUT repeats a label");
  if (tset != free) {
    std::string msg = "TOUT must list exactly the open labels {" +
                      join(std::vector<std::string>(free.begin(), free.end()), ",") + "}";
    throw std::invalid_argument(msg);
  }
  if (!net.order_.empty()) {
    auto leaves = net.order_.leaves();
    std::set<std::string> ls(leaves.begin(), leaves.end()), ns(net.names_.begin(), net.names_.end());
    if (ls != ns) throw std::invalid_argument("ORDER must name every tensor exactly once");
  }
  return net;
}

Network Network::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open network file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return from_string(ss.str());
}

std::string Network::to_net() const {
  std::string s;
  for (size_t i = 0; i < names_.size(); ++i) s += names_[i] + ": " + join(labels_[i], ", ") + "\n";
  s += "TOUT:";
  if (!tout_row_.empty() || !tout_col_.empty()) s += " " + join(tout_row_, ", ") + " ; " + join(tout_col_, ", ");
  s += "\nORDER: " + order_.str() + "\n";
  return s;
}

std::string Network::save_file(const std::string& path) const {
  std::string p = path;
  if (p.size() < 4 || p.compare(p.size() - 4, 4, ".net") != 0) p += ".net";
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write network file '" + p + "'");
  os << to_net();
  if (!os) throw std::runtime_error("failed writing network file '" + p + "'");
  return p;
}

size_t Network::slot_index(const std::string& slot) const {
  auto it = std::find(names_.begin(), names_.end(), slot);
  if (it == names_.end()) throw std::invalid_argument("network has no tensor named '" + slot + "'");
  return static_cast<size_t>(it - names_.begin());
}

const std::vector<std::string>& Network::slot_labels(const std::string& slot) const {
  return labels_[slot_index(slot)];
}

bool Network::is_bound(const std::string& slot) const { return bound_.count(slot) > 0; }

void Network::put_tensor(const std::string& slot, const UniTensor& t, const std::vector<std::string>& label_map) {
  const auto& abstract = labels_[slot_index(slot)];
  std::vector<std::string> map = label_map.empty() ? t.labels() : label_map;
  if (static_cast<int64_t>(abstract.size()) != t.rank())
    throw std::invalid_argument("tensor '" + slot + "' expects rank " + std::to_string(abstract.size()) + ", got " +
                                std::to_string(t.rank()));
  if (map.size() != abstract.size())
    throw std::invalid_argument("tensor '" + slot + "' needs " + std::to_string(abstract.size()) + " labels, got " +
                                std::to_string(map.size()));
  std::set<std::string> uniq(map.begin(), map.end());
  if (uniq.size() != map.size()) throw std::invalid_argument("label map for '" + slot + "' repeats a label");
  for (const auto& l : map)
    if (t.label_index(l) < 0) throw std::invalid_argument("tensor for '" + slot + "' has no label '" + l + "'");
  bound_[slot] = Binding{t, std::move(map)};
}

void Network::set_order(bool optimal, const std::string& order) {
  if (!order.empty()) {
    ContractionTree t = ContractionTree::parse(order);
    auto leaves = t.leaves();
    std::set<std::string> ls(leaves.begin(), leaves.end()), ns(names_.begin(), names_.end());
    if (ls != ns) throw std::invalid_argument("order must name every tensor of the network exactly once");
    order_ = t;
  }
  optimal_ = optimal;
}

std::string Network::get_order() const {
  if (!order_.empty()) return order_.str();
  ContractionTree t = ContractionTree::leaf(names_[0]);
  for (size_t i = 1; i < names_.size(); ++i) t = ContractionTree::join(t, ContractionTree::leaf(names_[i]));
  return t.str();
}

// Bound tensors relabeled to the abstract labels and named after their slots.
std::vector<UniTensor> Network::prepared() const {
  std::vector<UniTensor> out;
  for (size_t s = 0; s < names_.size(); ++s) {
    auto it = bound_.find(names_[s]);
    if (it == bound_.end()) throw std::invalid_argument("tensor '" + names_[s] + "' is not bound");
    const Binding& b = it->second;
    std::vector<std::string> fresh(b.tensor.labels().size());
    for (size_t k = 0; k < b.map.size(); ++k)
      fresh[static_cast<size_t>(b.tensor.label_index(b.map[k]))] = labels_[s][k];
    UniTensor t = b.tensor.relabel(fresh);
    t.set_name(names_[s]);
    out.push_back(t);
  }
  // Consistency of every summed label, reported with slot names.
  std::map<std::string, std::pair<size_t, const Bond*>> first;
  for (size_t s = 0; s < out.size(); ++s) {
    for (size_t k = 0; k < labels_[s].size(); ++k) {
      const std::string& l = labels_[s][k];
      const Bond& b = out[s].bond(l);
      auto [it, fresh] = first.emplace(l, std::make_pair(s, &b));
      if (fresh) continue;
      const Bond& a = *it->second.second;
      const std::string where = "label '" + l + "' between '" + names_[it->second.first] + "' and '" + names_[s] + "'";
      if (a.dim() != b.dim())
        throw std::invalid_argument(where + ": dimension " + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()));
      const bool ar = a.type() == BondType::REGULAR, br = b.type() == BondType::REGULAR;
      if (ar != br || (!ar && a.type() == b.type()))
        throw std::invalid_argument(where + ": bond directions " + to_string(a.type()) + " and " +
                                    to_string(b.type()) + " cannot be contracted");
      if (a.sectors() != b.sectors() || a.syms() != b.syms())
        throw std::invalid_argument(where + ": quantum numbers differ");
    }
  }
  return out;
}

CostModel Network::bound_dims() const {
  CostModel dims;
  for (size_t s = 0; s < names_.size(); ++s) {
    auto it = bound_.find(names_[s]);
    if (it == bound_.end()) continue;
    for (size_t k = 0; k < labels_[s].size(); ++k) dims[labels_[s][k]] = it->second.tensor.bond(it->second.map[k]).dim();
  }
  return dims;
}

UniTensor Network::launch() {
  std::vector<UniTensor> ts = prepared();
  UniTensor out;
  if (optimal_) {
    order_ = find_optimal_order(names_, labels_, bound_dims()).tree;
  }
  if (names_.size() == 1) {
    out = ts[0].clone();
  } else if (!order_.empty()) {
    out = Contract(ts, order_.str(), false);
  } else {
    out = Contract(ts, "", false);
  }
  std::vector<std::string> tout = tout_row_;
  tout.insert(tout.end(), tout_col_.begin(), tout_col_.end());
  if (tout.empty()) return out;
  return out.permute(tout, static_cast<int64_t>(tout_row_.size())).contiguous();
}

bool Network::operator==(const Network& o) const {
  return names_ == o.names_ && labels_ == o.labels_ && tout_row_ == o.tout_row_ && tout_col_ == o.tout_col_ &&
         order_.str() == o.order_.str();
}

std::ostream& operator<<(std::ostream& os, const Network& net) {
  os << "==== Network ====\n";
  for (const auto& n : net.slot_names()) {
    os << (net.is_bound(n) ? "[x] " : "[ ] ") << n << " :";
    for (const auto& l : net.slot_labels(n)) os << " " << l;
    os << " \n";
  }
  os << "TOUT :";
  for (const auto& l : net.tout_row()) os << " " << l;
  os << " ;";
  for (const auto& l : net.tout_col()) os << " " << l;
  os << " \n";
  os << "ORDER : " << (net.slot_names().empty() ? "" : net.get_order()) << "\n";
  os << "=================\n";
  return os;
}

}  // namespace tnx
