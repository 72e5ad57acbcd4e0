// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "test_support.hpp"
#include "ttno/oqs.hpp"
#include "ttno/ttno.hpp"

namespace {

using namespace ttno;
using ttno::testing::elementwise_dense;
using ttno::testing::max_abs_diff;
using ttno::testing::S;
using ttno::testing::term;
using ttno::testing::toy_hamiltonian;
using ttno::testing::toy_tree;

Hamiltonian with_random_coefficients(const Hamiltonian &h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  auto terms = h.terms();
  for (auto &t : terms) t.coefficient = Complex(u(rng), u(rng));
  return Hamiltonian(h.tree(), terms, h.registry());
}

TEST(AssignIndices, InsertionOrderPerEdge) {
  const auto d = from_hamiltonian(toy_hamiltonian());
  const auto a = assign_indices(d);
  for (std::size_t e = 0; e < d.tree().num_edges(); ++e) {
    const auto &w = d.edge_vertices(e);
    ASSERT_EQ(a.edge_dims[e], w.size());
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_EQ(a.index[w[k]], k);
  }
  EXPECT_EQ(assign_indices(d), a);
}

TEST(EmitTensors, SingleTermIsProductOfMatrices) {
  const auto tree = toy_tree();
  Hamiltonian h(tree, {term({{2, "Y"}, {3, "X"}, {4, "X"}})});
  const auto ttno = build_ttno(h);
  for (auto &[e, dim] : ttno.bond_dimensions()) EXPECT_EQ(dim, 1u) << e;
  OperatorRegistry reg;
  for (auto &[s, ten] : ttno.tensors()) {
    const std::vector<std::size_t> zero(ten.legs().size(), 0);
    const auto expect = h.terms()[0].factor_or_identity(s, 2);
    EXPECT_LT(max_abs_diff(ten.slice(zero), reg.resolve(expect)), 1e-15) << s;
  }
  EXPECT_EQ(element_count(ttno), 32u);
  EXPECT_EQ(dense_element_count(ttno), 32u);
}

TEST(EmitTensors, LegOrderParentFirstChildrenAscending) {
  const auto ttno = build_ttno(toy_hamiltonian());
  const auto &legs = ttno.at(S(5)).legs();
  ASSERT_EQ(legs.size(), 3u);
  EXPECT_EQ(legs[0].edge, Edge(S(1), S(5)));
  EXPECT_EQ(legs[1].edge, Edge(S(5), S(6)));
  EXPECT_EQ(legs[2].edge, Edge(S(5), S(7)));
  const auto &root = ttno.at(S(1)).legs();
  EXPECT_EQ(root[0].edge, Edge(S(1), S(2)));
  EXPECT_EQ(root[1].edge, Edge(S(1), S(5)));
}

TEST(EmitTensors, BondDimsMatchDiagram) {
  const auto d = from_hamiltonian(toy_hamiltonian());
  EXPECT_EQ(emit_tensors(d, OperatorRegistry{}).bond_dimensions(), d.bond_dimensions());
}

TEST(Contraction, ToyMatchesOracle) {
  const auto h = toy_hamiltonian();
  const auto ttno = build_ttno(h);
  const auto order = h.tree().preorder();
  const DenseMatrix c = contract_to_dense(ttno, order);
  ASSERT_EQ(c.rows(), 256);
  EXPECT_LT(max_abs_diff(c, elementwise_dense(h, order)), 1e-12);
  std::vector<SiteId> shuffled = order;
  std::mt19937_64 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_LT(max_abs_diff(contract_to_dense(ttno, shuffled), elementwise_dense(h, shuffled)), 1e-12);
}

TEST(Contraction, ComplexCoefficients) {
  const auto h = with_random_coefficients(toy_hamiltonian(), 17);
  EXPECT_LT(dense_deviation(build_ttno(h), h), 1e-12);
}

TEST(Contraction, MixedPhysicalDimensions) {
  TreeTopology tree({S(0), S(1), S(2), S(3)}, {{S(0), S(1)}, {S(1), S(2)}, {S(1), S(3)}}, S(1),
                    {{S(1), 3}, {S(3), 4}});
  ProductTerm a, b, c, n;
  a.factors.emplace(S(0), SiteOperator("X", 2));
  a.factors.emplace(S(1), SiteOperator("B", 3));
  b.factors.emplace(S(1), SiteOperator("Bdag", 3));
  b.factors.emplace(S(3), SiteOperator("B", 4));
  b.coefficient = Complex(0.3, -0.7);
  c.factors.emplace(S(2), SiteOperator("Z", 2));
  c.factors.emplace(S(3), SiteOperator("N", 4));
  n.factors.emplace(S(1), SiteOperator("N", 3));
  n.coefficient = 2.5;
  Hamiltonian h(tree, {a, b, c, n});
  const auto ttno = build_ttno(h);
  EXPECT_EQ(ttno.at(S(3)).phys_dim(), 4);
  EXPECT_LT(max_abs_diff(contract_to_dense(ttno), elementwise_dense(h, tree.preorder())), 1e-12);
}

TEST(Contraction, SmallOqsChain) {
  oqs::Spec spec;
  spec.spins = 2;
  spec.baths = 2;
  spec.J = 0.8;
  spec.g = Complex(0.4, 0.25);
  spec.omega = 1.3;
  const auto h = oqs::hamiltonian(oqs::Topology::kChain, spec);
  const auto order = h.tree().preorder();
  EXPECT_LT(max_abs_diff(contract_to_dense(build_ttno(h), order), elementwise_dense(h, order)), 1e-12);
}

TEST(Contraction, LinearInTerms) {
  const auto tree = toy_tree();
  auto all = with_random_coefficients(random_hamiltonian(tree, 12, {"X", "Y", "Z"}, 8, 41), 5).terms();
  Hamiltonian h1(tree, {all.begin(), all.begin() + 5});
  Hamiltonian h2(tree, {all.begin() + 5, all.end()});
  Hamiltonian h(tree, all);
  const auto order = tree.preorder();
  EXPECT_LT(max_abs_diff(contract_to_dense(build_ttno(h), order),
                         contract_to_dense(build_ttno(h1), order) + contract_to_dense(build_ttno(h2), order)),
            1e-12);
}

TEST(Contraction, CapAndOrderingErrors) {
  const auto ttno = build_ttno(toy_hamiltonian());
  EXPECT_THROW(contract_to_dense(ttno, ttno.tree().preorder(), 128), CapExceededError);
  EXPECT_THROW(contract_to_dense(ttno, {S(1), S(2)}), InputError);
}

TEST(Contraction, RandomTreesAndHamiltonians) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const auto tree = ttno::testing::random_tree(n, rng);
    const std::size_t support = 1 + rng() % n;
    const std::size_t n_terms = 1 + rng() % std::min<std::size_t>(distinct_term_count(n, 3, support), 20);
    const auto h = with_random_coefficients(random_hamiltonian(tree, n_terms, {"X", "Y", "Z"}, support, rng() | 1),
                                            rng());
    const auto order = tree.preorder();
    ASSERT_LT(max_abs_diff(contract_to_dense(build_ttno(h), order), elementwise_dense(h, order)), 1e-12);
  }
}

// Non-zero slices are exactly the distinct vertex tuples of the diagram.
TEST(Sparsity, NonZeroSlicesAreDistinctVertexTuples) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 10;
    const auto tree = ttno::testing::random_tree(n, rng);
    const auto h = random_hamiltonian(tree, 1 + rng() % 20, {"X", "Y", "Z"}, n, rng() | 1);
    const auto d = from_hamiltonian(h);
    std::set<std::pair<std::size_t, std::vector<std::size_t>>> tuples;
    for (auto &y : d.hyperedges()) tuples.insert({y.site, y.vertices});
    ASSERT_EQ(nonzero_slice_count(emit_tensors(d, h.registry())), tuples.size());
    ASSERT_LE(tuples.size(), d.hyperedges().size());
  }
}

TEST(Ttno, ValidateRejectsInconsistentShapes) {
  const auto ttno = build_ttno(toy_hamiltonian());
  auto tensors = ttno.tensors();
  auto legs = tensors.at(S(5)).legs();
  std::swap(legs[1], legs[2]);
  tensors[S(5)] = TTNOTensor(S(5), legs, 2);
  EXPECT_THROW(TTNO(ttno.tree(), tensors), ConsistencyError);

  tensors = ttno.tensors();
  legs = tensors.at(S(6)).legs();
  legs[0].dim += 1;
  tensors[S(6)] = TTNOTensor(S(6), legs, 2);
  EXPECT_THROW(TTNO(ttno.tree(), tensors), ConsistencyError);

  tensors = ttno.tensors();
  tensors.erase(S(8));
  EXPECT_THROW(TTNO(ttno.tree(), tensors), ConsistencyError);
}

TEST(Dump, RoundTripIsBitExact) {
  auto h = with_random_coefficients(toy_hamiltonian(), 23);
  auto ttno = build_ttno(h);
  ttno.tensors().at(S(3)).data()[1] = Complex(-0.0, 1e-300);
  std::stringstream ss;
  write_ttno(ss, ttno);
  const auto back = read_ttno(ss);
  EXPECT_EQ(back.tree().root(), ttno.tree().root());
  EXPECT_EQ(back.tree().edges(), ttno.tree().edges());
  ASSERT_EQ(back.tensors().size(), ttno.tensors().size());
  for (auto &[s, ten] : ttno.tensors()) {
    const auto &other = back.at(s);
    EXPECT_EQ(other.legs(), ten.legs());
    ASSERT_EQ(other.data().size(), ten.data().size());
    for (std::size_t k = 0; k < ten.data().size(); ++k) {
      EXPECT_EQ(std::signbit(other.data()[k].real()), std::signbit(ten.data()[k].real()));
      EXPECT_EQ(other.data()[k], ten.data()[k]);
    }
  }
  std::stringstream again;
  write_ttno(again, back);
  std::stringstream first;
  write_ttno(first, ttno);
  EXPECT_EQ(again.str(), first.str());
}

TEST(Dump, MalformedInputIsParseError) {
  for (const std::string bad : {"", "ttno 2\n", "ttno 1\nroot x\n", "ttno 1\nroot 1\nsites 1\n1 2\nedges 0\ntensor 1 2 0\n1 0\n"}) {
    std::stringstream ss(bad);
    EXPECT_THROW(read_ttno(ss), ParseError) << bad;
  }
}

// Changing any single stored non-zero element changes the represented operator.
TEST(Dump, EveryNonZeroElementMatters) {
  const auto h = with_random_coefficients(toy_hamiltonian(), 31);
  const auto ttno = build_ttno(h);
  ASSERT_LT(dense_deviation(ttno, h), 1e-12);
  std::size_t mutated = 0;
  for (auto &[s, ten] : ttno.tensors()) {
    for (std::size_t k = 0; k < ten.data().size(); ++k) {
      if (ten.data()[k] == Complex(0.0)) continue;
      TTNO bad = ttno;
      bad.tensors().at(s).data()[k] = -ten.data()[k];
      ASSERT_GT(dense_deviation(bad, h), 1e-10) << "site " << s << " element " << k;
      ++mutated;
    }
  }
  EXPECT_GT(mutated, 0u);
}

}  // namespace
