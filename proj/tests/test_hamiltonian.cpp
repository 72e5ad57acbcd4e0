// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "test_support.hpp"
#include "ttno/hamiltonian.hpp"
#include "ttno/operators.hpp"

namespace {

using namespace ttno;
using ttno::testing::S;
using ttno::testing::term;

TEST(SiteOperator, Invariants) {
  EXPECT_THROW(SiteOperator("", 2), ValidationError);
  EXPECT_THROW(SiteOperator("X", 0), ValidationError);
  EXPECT_THROW(SiteOperator("A", DenseMatrix::Zero(2, 3)), ValidationError);
  EXPECT_THROW(SiteOperator("I", ops::pauli_x()), ValidationError);
  EXPECT_NO_THROW(SiteOperator("I", ops::identity(3)));
  EXPECT_EQ(SiteOperator("X", 2), SiteOperator("X", 2));
  EXPECT_NE(SiteOperator("X", 2), SiteOperator("X", 3));
}

TEST(Registry, BuiltinsAndCustom) {
  OperatorRegistry reg;
  EXPECT_TRUE(reg.contains("Z", 2));
  EXPECT_FALSE(reg.contains("Z", 3));
  EXPECT_TRUE(reg.contains("B", 4));
  EXPECT_THROW(reg.get("Q", 2), UnknownLabelError);
  const DenseMatrix b = reg.get("B", 3);
  EXPECT_DOUBLE_EQ(b(0, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(b(1, 2).real(), std::sqrt(2.0));
  EXPECT_LT((reg.get("Bdag", 3) * b - reg.get("N", 3)).norm(), 1e-15);
  reg.add("Q", ops::pauli_y());
  EXPECT_TRUE(reg.contains("Q", 2));
  EXPECT_THROW(reg.add("I", ops::pauli_x()), ValidationError);
}

TEST(Folding, UnitCoefficientUnchanged) {
  const auto t = term({{2, "Y"}, {3, "X"}, {4, "X"}});
  EXPECT_EQ(fold_coefficient(t, S(1), 2), t);
}

TEST(Folding, ScalarGoesToSmallestSite) {
  const auto t = term({{0, "X"}, {1, "X"}}, -1.5);
  const auto f = fold_coefficient(t, S(0), 2);
  EXPECT_EQ(f.coefficient, Complex(1.0));
  EXPECT_EQ(f.factors.at(S(0)).label(), "-1.5*X");
  EXPECT_EQ(f.factors.at(S(1)).label(), "X");
}

TEST(Folding, MatrixOfScaledFactor) {
  const auto t = term({{3, "Z"}, {4, "B"}}, 0.5);
  const auto f = fold_coefficient(t, S(3), 2);
  OperatorRegistry reg;
  EXPECT_LT((reg.resolve(f.factors.at(S(3))) - 0.5 * ops::pauli_z()).norm(), 1e-15);
}

TEST(Folding, AllIdentityTermAtRoot) {
  ProductTerm t;
  t.coefficient = 2.0;
  const auto f = fold_coefficient(t, S(7), 3);
  ASSERT_EQ(f.factors.size(), 1u);
  EXPECT_EQ(f.factors.at(S(7)).label(), "2*I");
  OperatorRegistry reg;
  EXPECT_LT((reg.resolve(f.factors.at(S(7))) - 2.0 * ops::identity(3)).norm(), 1e-15);
}

TEST(Folding, PreservesDense) {
  std::mt19937_64 rng(11);
  const auto tree = ttno::testing::toy_tree();
  auto h = random_hamiltonian(tree, 12, {"X", "Y", "Z"}, 4, 99);
  std::vector<ProductTerm> scaled = h.terms();
  std::uniform_real_distribution<double> u(-2, 2);
  for (auto &t : scaled) t.coefficient = Complex(u(rng), u(rng));
  Hamiltonian raw(tree, scaled);
  Hamiltonian folded(tree, raw.folded_terms());
  const auto order = tree.preorder();
  EXPECT_LT(ttno::testing::max_abs_diff(to_dense(raw, order), to_dense(folded, order)), 1e-12);
}

TEST(Hamiltonian, Validation) {
  const auto tree = ttno::testing::toy_tree();
  EXPECT_THROW(Hamiltonian(tree, {term({{1, "X"}}), term({{1, "X"}})}), DuplicateTermError);
  EXPECT_THROW(Hamiltonian(tree, {term({{1, "X"}}, 0.0)}), ValidationError);
  EXPECT_THROW(Hamiltonian(tree, {term({{42, "X"}})}), ValidationError);
  EXPECT_THROW(Hamiltonian(tree, {term({{1, "I"}})}), ValidationError);
  EXPECT_THROW(Hamiltonian(tree, {term({{1, "X"}}, 1.0, 3)}), ValidationError);
  // Same symbolic product but different coefficient folds to a different label.
  EXPECT_NO_THROW(Hamiltonian(tree, {term({{1, "X"}}), term({{1, "X"}}, 2.0)}));
}

TEST(Hamiltonian, TermKeyIgnoresInsertionOrder) {
  ProductTerm a, b;
  a.factors.emplace(S(5), SiteOperator("Z", 2));
  a.factors.emplace(S(1), SiteOperator("X", 2));
  b.factors.emplace(S(1), SiteOperator("X", 2));
  b.factors.emplace(S(5), SiteOperator("Z", 2));
  EXPECT_EQ(a.key(), b.key());
  EXPECT_EQ(a, b);
}

TEST(Dense, SingleSite) {
  TreeTopology t({S(1)}, {}, S(1));
  Hamiltonian h(t, {term({{1, "X"}})});
  EXPECT_LT(ttno::testing::max_abs_diff(to_dense(h), ops::pauli_x()), 0.0 + 1e-300);
}

TEST(Dense, ToyMatchesElementwiseOracle) {
  const auto h = ttno::testing::toy_hamiltonian();
  const auto order = h.tree().preorder();
  const DenseMatrix m = to_dense(h, order);
  ASSERT_EQ(m.rows(), 256);
  EXPECT_LT(ttno::testing::max_abs_diff(m, ttno::testing::elementwise_dense(h, order)), 1e-12);
  // A different ordering also agrees with the oracle in that ordering.
  std::vector<SiteId> rev(order.rbegin(), order.rend());
  EXPECT_LT(ttno::testing::max_abs_diff(to_dense(h, rev), ttno::testing::elementwise_dense(h, rev)), 1e-12);
}

TEST(Dense, LinearInTerms) {
  const auto tree = ttno::testing::toy_tree();
  auto all = random_hamiltonian(tree, 10, {"X", "Y", "Z"}, 3, 5).terms();
  Hamiltonian h1(tree, {all.begin(), all.begin() + 4});
  Hamiltonian h2(tree, {all.begin() + 4, all.end()});
  Hamiltonian h(tree, all);
  const auto order = tree.preorder();
  EXPECT_LT(ttno::testing::max_abs_diff(to_dense(h, order), to_dense(h1, order) + to_dense(h2, order)), 1e-12);
}

TEST(Dense, CapAndLabels) {
  const auto tree = ttno::testing::toy_tree();
  Hamiltonian h(tree, {term({{1, "X"}})});
  EXPECT_THROW(to_dense(h, tree.preorder(), 255), CapExceededError);
  Hamiltonian unknown(tree, {term({{1, "Q"}})});
  EXPECT_THROW(to_dense(unknown), UnknownLabelError);
  EXPECT_THROW(to_dense(h, {S(1), S(2)}), InputError);
}

TEST(Random, DeterministicAndDistinct) {
  const auto tree = ttno::testing::toy_tree();
  auto a = random_hamiltonian(tree, 30, {"X", "Y", "Z"}, 8, 1234);
  auto b = random_hamiltonian(tree, 30, {"X", "Y", "Z"}, 8, 1234);
  auto c = random_hamiltonian(tree, 30, {"X", "Y", "Z"}, 8, 1235);
  EXPECT_EQ(a.terms(), b.terms());
  EXPECT_NE(a.terms(), c.terms());
  std::set<std::string> keys;
  for (auto &t : a.terms()) {
    EXPECT_TRUE(keys.insert(t.key()).second);
    EXPECT_GE(t.factors.size(), 1u);
    EXPECT_LE(t.factors.size(), 8u);
  }
}

TEST(Random, PigeonholeError) {
  TreeTopology t({S(0), S(1)}, {{S(0), S(1)}}, S(0));
  // Supports of size <= 2 with 3 labels: 3 + 3 + 9 = 15 distinct terms.
  EXPECT_EQ(distinct_term_count(2, 3, 2), 15u);
  EXPECT_NO_THROW(random_hamiltonian(t, 15, {"X", "Y", "Z"}, 2, 3));
  EXPECT_THROW(random_hamiltonian(t, 16, {"X", "Y", "Z"}, 2, 3), InputError);
  EXPECT_THROW(random_hamiltonian(t, 1, {"X", "I"}, 2, 3), InputError);
}

TEST(Random, LabelFrequencies) {
  TreeTopology t({S(0), S(1)}, {{S(0), S(1)}}, S(0));
  std::map<std::pair<std::uint32_t, std::string>, int> count;
  std::map<std::uint32_t, int> chosen;
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) {
    auto h = random_hamiltonian(t, 1, {"X", "Y", "Z"}, 2, seed);
    for (auto &[s, op] : h.terms()[0].factors) {
      ++count[{s.value, op.label()}];
      ++chosen[s.value];
    }
  }
  for (auto &[key, n] : count) EXPECT_NEAR(double(n) / chosen[key.first], 1.0 / 3.0, 0.02) << key.second;
}

TEST(Random, SupportLawIsUniformOverSubsets) {
  // On 3 sites with max_support 3 each of the 7 non-empty subsets is equally likely.
  TreeTopology t({S(0), S(1), S(2)}, {{S(0), S(1)}, {S(1), S(2)}}, S(1));
  std::map<std::string, int> by_support;
  const int draws = 14000;
  for (int seed = 1; seed <= draws; ++seed) {
    auto h = random_hamiltonian(t, 1, {"X"}, 3, static_cast<std::uint64_t>(seed));
    std::string key;
    for (auto &[s, op] : h.terms()[0].factors) key += std::to_string(s.value);
    ++by_support[key];
  }
  EXPECT_EQ(by_support.size(), 7u);
  for (auto &[k, n] : by_support) EXPECT_NEAR(double(n) / draws, 1.0 / 7.0, 0.015) << k;
}

}  // namespace
