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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tnx/contract.hpp"
#include "tnx/network.hpp"
#include "tnx/serialize.hpp"

using namespace tnx;
using Labels = std::vector<std::string>;

namespace {

const char* kChain =
    "M1: i, j\n"
    "M2: j, k\n"
    "M3: k, l\n"
    "TOUT: i; l\n";

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tnx_test_" + name)).string();
}

}  // namespace

TEST(Network, ParsesSlotsAndTout) {
  Network n = Network::from_string(kChain);
  EXPECT_EQ(n.slot_names(), (Labels{"M1", "M2", "M3"}));
  EXPECT_EQ(n.slot_labels("M2"), (Labels{"j", "k"}));
  EXPECT_EQ(n.tout_row(), (Labels{"i"}));
  EXPECT_EQ(n.tout_col(), (Labels{"l"}));
  EXPECT_EQ(n.get_order(), "((M1,M2),M3)");
  EXPECT_FALSE(n.is_bound("M1"));
}

TEST(Network, ToutWithoutSemicolon) {
  Network n = Network::from_string("A: a, b\nB: b, c\nTOUT: a, c\n");
  EXPECT_EQ(n.tout_row(), (Labels{"a"}));
  EXPECT_EQ(n.tout_col(), (Labels{"c"}));
  Network s = Network::from_string("A: a, b\nB: a, b\nTOUT:\n");
  EXPECT_TRUE(s.tout_row().empty());
  EXPECT_TRUE(s.tout_col().empty());
}

TEST(Network, ParseErrors) {
  auto bad = [](const std::string& text) { EXPECT_THROW(Network::from_string(text), std::invalid_argument) << text; };
  bad("");
  bad("A a, b\n");
  bad("A: a, b\nA: b, c\n");
  bad("A: a, a\n");
  bad("A: a,\n");
  bad("A:\n");
  bad("A: a\nB: a\nC: a\n");
  bad("A: a, b\nB: b\nTOUT: b\n");
  bad("A: a, b\nB: b\nTOUT: x, a\n");
  bad("A: a, b\nB: b\nTOUT: a\nTOUT: a\n");
  bad("A: a, b\nB: b\nTOUT: a\nORDER: (A,C)\n");
  bad("A: a, b\nB: b\nTOUT: a\nORDER: (A,B\n");
  bad("A: a; b\nB: b\n");
  bad("A: a, b\nB: b\nTOUT: a;;\n");
}

TEST(Network, CommentsAndBlankLinesIgnored) {
  Network n = Network::from_string("# header\n\nA: a, b  # trailing\nB: b, c\n\nTOUT: a; c\n");
  EXPECT_EQ(n, Network::from_string("A: a, b\nB: b, c\nTOUT: a; c\n"));
}

TEST(Network, PrintRoundTrip) {
  Network n = Network::from_string(std::string(kChain) + "ORDER: (M1,(M2,M3))\n");
  Network back = Network::from_string(n.to_net());
  EXPECT_EQ(back, n);
  EXPECT_EQ(back.to_net(), n.to_net());
  EXPECT_EQ(back.get_order(), "(M1,(M2,M3))");
  std::ostringstream os;
  os << n;
  EXPECT_EQ(os.str().rfind("==== Network ====", 0), 0u);
  EXPECT_NE(os.str().find("ORDER : (M1,(M2,M3))"), std::string::npos);
}

TEST(Network, SaveAppendsExtension) {
  Network n = Network::from_string(kChain);
  std::string p = n.save_file(temp_path("chain"));
  EXPECT_EQ(p, temp_path("chain") + ".net");
  EXPECT_EQ(Network::from_file(p), n);
  EXPECT_EQ(Network(p), n);
  std::filesystem::remove(p);
  EXPECT_THROW(Network::from_file(temp_path("does_not_exist.net")), std::runtime_error);
}

TEST(Network, LaunchMatchesPairwise) {
  Network n = Network::from_string(kChain);
  UniTensor a = UniTensor::normal({2, 3}, 0, 1, 1, {"p", "q"});
  UniTensor b = UniTensor::normal({3, 4}, 0, 1, 2, {"x", "y"});
  UniTensor c = UniTensor::normal({5, 4}, 0, 1, 3, {"u", "v"});
  n.put_tensor("M1", a);
  n.put_tensor("M2", b);
  n.put_tensor("M3", c, {"v", "u"});
  EXPECT_TRUE(n.is_bound("M3"));
  EXPECT_EQ(n.bound_dims(), (CostModel{{"i", 2}, {"j", 3}, {"k", 4}, {"l", 5}}));
  UniTensor out = n.launch();
  EXPECT_EQ(out.labels(), (Labels{"i", "l"}));
  EXPECT_EQ(out.rowrank(), 1);
  UniTensor want = Contract(Contract(a.relabel({"i", "j"}), b.relabel({"j", "k"})), c.relabel({"l", "k"}));
  EXPECT_LE((out - want).Norm(), 1e-12 * want.Norm());
  // the caller's tensors keep their labels
  EXPECT_EQ(c.labels(), (Labels{"u", "v"}));
}

TEST(Network, OrderControl) {
  Network n = Network::from_string(kChain);
  n.set_order(false, "(M2,(M1,M3))");
  EXPECT_EQ(n.get_order(), "(M2,(M1,M3))");
  EXPECT_FALSE(n.optimal());
  n.set_order(false);
  EXPECT_EQ(n.get_order(), "(M2,(M1,M3))");
  n.set_order(true);
  EXPECT_TRUE(n.optimal());
  EXPECT_THROW(n.set_order(false, "(M1,M2)"), std::invalid_argument);
  EXPECT_THROW(n.set_order(false, "((M1,M2),M4)"), std::invalid_argument);

  std::vector<UniTensor> ts{UniTensor::ones({10, 20}), UniTensor::ones({20, 2}), UniTensor::ones({2, 4})};
  n.put_tensor("M1", ts[0].relabel({"i", "j"}));
  n.put_tensor("M2", ts[1].relabel({"j", "k"}));
  n.put_tensor("M3", ts[2].relabel({"k", "l"}));
  UniTensor r = n.launch();
  EXPECT_EQ(r.get_elem({0, 0}).real(), 40.0);
}

TEST(Network, PutTensorErrors) {
  Network n = Network::from_string(kChain);
  EXPECT_THROW(n.put_tensor("M9", UniTensor::ones({2, 3})), std::invalid_argument);
  EXPECT_THROW(n.put_tensor("M1", UniTensor::ones({2})), std::invalid_argument);
  EXPECT_THROW(n.put_tensor("M1", UniTensor::ones({2, 3}, {"a", "b"}), {"a", "a"}), std::invalid_argument);
  EXPECT_THROW(n.put_tensor("M1", UniTensor::ones({2, 3}, {"a", "b"}), {"a", "z"}), std::invalid_argument);
  n.put_tensor("M1", UniTensor::ones({2, 3}));
  EXPECT_THROW(n.launch(), std::invalid_argument);
  n.put_tensor("M2", UniTensor::ones({4, 4}));
  n.put_tensor("M3", UniTensor::ones({4, 5}));
  EXPECT_THROW(n.launch(), std::invalid_argument);
}

TEST(Network, ScalarResult) {
  Network n = Network::from_string("A: a, b\nB: a, b\nTOUT:\n");
  UniTensor x = UniTensor::arange(6).reshape({2, 3});
  n.put_tensor("A", x);
  n.put_tensor("B", x);
  UniTensor r = n.launch();
  EXPECT_EQ(r.rank(), 0);
  EXPECT_EQ(r.item().real(), 55.0);
}

TEST(Serialize, DenseRoundTrip) {
  for (auto dt : {DType::Bool, DType::Int64, DType::Float64, DType::Complex128}) {
    UniTensor t = UniTensor(DenseTensor::normal({2, 3, 4}, 0, 3, 5).astype(dt), 2, {"a", "b", "c"});
    t.set_name("T");
    std::stringstream ss;
    save(t.permute({"c", "a", "b"}), ss);
    UniTensor u = load(ss);
    EXPECT_EQ(u.name(), "T");
    EXPECT_EQ(u.labels(), (Labels{"c", "a", "b"}));
    EXPECT_EQ(u.rowrank(), 2);
    EXPECT_EQ(u.dtype(), dt);
    EXPECT_EQ(oracle::values(u.get_block()), oracle::values(t.permute({"c", "a", "b"}).contiguous().get_block()));
  }
}

TEST(Serialize, SymmetricRoundTrip) {
  std::mt19937_64 rng(31);
  Bond in(BondType::IN, {{{-1}, 2}, {{1}, 3}}, {Symmetry::U1()});
  UniTensor t({in, in.redirect()}, {"a", "b"}, 1);
  oracle::randomize(t, rng);
  std::string p = temp_path("sym.tnx");
  save_file(t, p);
  UniTensor u = load_file(p);
  std::filesystem::remove(p);
  EXPECT_EQ(u.bonds(), t.bonds());
  ASSERT_EQ(u.Nblocks(), t.Nblocks());
  for (int64_t k = 0; k < t.Nblocks(); ++k) {
    EXPECT_EQ(u.qn_indices(k), t.qn_indices(k));
    EXPECT_EQ(oracle::values(u.block(k)), oracle::values(t.block(k)));
  }
}

TEST(Serialize, RejectsGarbage) {
  std::stringstream bad("not a tensor at all");
  EXPECT_THROW(load(bad), std::runtime_error);
  std::stringstream ss;
  save(UniTensor::ones({3, 3}), ss);
  std::string s = ss.str();
  std::stringstream cut(s.substr(0, s.size() - 5));
  EXPECT_THROW(load(cut), std::runtime_error);
  EXPECT_THROW(load_file(temp_path("missing.tnx")), std::runtime_error);
}
