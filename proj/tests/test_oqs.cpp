// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "ttno/oqs.hpp"
#include "ttno/svd_reference.hpp"

namespace {

using namespace ttno;
using ttno::testing::max_abs_diff;
using oqs::Topology;

oqs::Spec make_spec(int N, int M, int d = 2) {
  oqs::Spec spec;
  spec.spins = N;
  spec.baths = M;
  spec.boson_dim = d;
  spec.J = 0.7;
  spec.g = Complex(0.3, -0.45);
  spec.omega = 1.25;
  return spec;
}

std::size_t tensor_elements(const TTNOTensor &t) {
  return t.num_slices() * static_cast<std::size_t>(t.phys_dim() * t.phys_dim());
}

TEST(Oqs, TermCounts) {
  auto spec = make_spec(4, 3);
  EXPECT_EQ(oqs::terms(spec).size(), 3u * 3 + 2u * 12 + 12u);
  spec.coupling = oqs::Coupling::kCombined;
  EXPECT_EQ(oqs::terms(spec).size(), 3u * 3 + 12u + 12u);
  EXPECT_EQ(oqs::terms(make_spec(1, 0)).size(), 0u);
  EXPECT_THROW(oqs::terms(make_spec(0, 1)), InputError);
  EXPECT_THROW(oqs::terms(make_spec(2, 1, 1)), InputError);
}

TEST(Oqs, SiteNumberingIsABijection) {
  const auto spec = make_spec(3, 4);
  std::set<SiteId> ids;
  for (int s = 0; s < 3; ++s) {
    ids.insert(oqs::spin_site(spec, s));
    EXPECT_TRUE(oqs::is_spin(spec, oqs::spin_site(spec, s)));
    for (int b = 0; b < 4; ++b) {
      ids.insert(oqs::boson_site(spec, s, b));
      EXPECT_FALSE(oqs::is_spin(spec, oqs::boson_site(spec, s, b)));
    }
  }
  EXPECT_EQ(ids.size(), oqs::site_count(spec));
  EXPECT_EQ(ids.size(), 15u);
  EXPECT_EQ(ids.rbegin()->value, 14u);
}

TEST(Oqs, TopologyShapes) {
  const auto spec = make_spec(3, 2);
  const auto chain = oqs::topology(Topology::kChain, spec);
  const auto ftp = oqs::topology(Topology::kFork, spec);
  const auto star = oqs::topology(Topology::kStar, spec);
  for (const auto *t : {&chain, &ftp, &star}) {
    EXPECT_EQ(t->size(), 9u);
    EXPECT_EQ(t->num_edges(), 8u);
  }
  for (SiteId s : chain.nodes()) EXPECT_LE(chain.neighbours(s).size(), 2u);
  EXPECT_EQ(ftp.neighbours(oqs::spin_site(spec, 1)).size(), 3u);
  EXPECT_EQ(ftp.neighbours(oqs::boson_site(spec, 1, 1)).size(), 1u);
  EXPECT_EQ(star.neighbours(oqs::spin_site(spec, 1)).size(), 4u);
  for (int b = 0; b < 2; ++b) EXPECT_EQ(star.neighbours(oqs::boson_site(spec, 0, b)).size(), 1u);
  EXPECT_EQ(star.phys_dim(oqs::boson_site(spec, 2, 1)), 2);
  EXPECT_EQ(oqs::topology(Topology::kFork, make_spec(3, 2, 4)).phys_dim(oqs::boson_site(spec, 2, 1)), 4);
}

TEST(Oqs, HamiltonianIsHermitian) {
  const auto h = oqs::hamiltonian(Topology::kChain, make_spec(2, 2, 3));
  const DenseMatrix m = to_dense(h);
  EXPECT_LT(max_abs_diff(m, m.adjoint()), 1e-13);
}

TEST(Oqs, SameOperatorOnAllTopologies) {
  for (auto coupling : {oqs::Coupling::kSplit, oqs::Coupling::kCombined}) {
    auto spec = make_spec(2, 2);
    spec.coupling = coupling;
    const auto order = oqs::chain_order(spec);
    const DenseMatrix reference = to_dense(oqs::hamiltonian(Topology::kChain, spec), order);
    for (auto kind : {Topology::kChain, Topology::kFork, Topology::kStar}) {
      const auto h = oqs::hamiltonian(kind, spec);
      EXPECT_LT(max_abs_diff(contract_to_dense(build_ttno(h), order), reference), 1e-12) << oqs::to_string(kind);
      EXPECT_LT(max_abs_diff(to_dense(h, order), reference), 1e-13);
    }
  }
}

TEST(Oqs, SharedCouplingLabelStillExact) {
  auto spec = make_spec(3, 1);
  spec.separate_coupling_channel = false;
  const auto h = oqs::hamiltonian(Topology::kFork, spec);
  EXPECT_LT(dense_deviation(build_ttno(h), h), 1e-12);
}

void expect_profiles(Topology kind, const oqs::Spec &spec) {
  const auto ttno = build_ttno(oqs::hamiltonian(kind, spec));
  const auto dims = ttno.bond_dimensions();
  const auto profiles = oqs::expected_bond_dims(kind, spec);
  ASSERT_FALSE(profiles.empty());
  for (auto &p : profiles) {
    std::vector<std::size_t> got;
    for (auto &e : p.edges) got.push_back(dims.at(e));
    EXPECT_EQ(got, p.dims) << oqs::to_string(kind) << " site " << p.site;
  }
}

TEST(Oqs, ExpectedProfilesFourSpinsThreeBaths) {
  const auto spec = make_spec(4, 3);
  expect_profiles(Topology::kChain, spec);
  expect_profiles(Topology::kFork, spec);
  expect_profiles(Topology::kStar, spec);
}

TEST(Oqs, ExpectedProfilesOtherSizes) {
  for (auto [N, M] : std::vector<std::pair<int, int>>{{3, 2}, {5, 2}, {5, 4}, {6, 3}})
    for (auto kind : {Topology::kChain, Topology::kFork, Topology::kStar}) expect_profiles(kind, make_spec(N, M));
  EXPECT_THROW(oqs::expected_bond_dims(Topology::kChain, make_spec(2, 3)), InputError);
}

TEST(Oqs, SplitAndCombinedCouplingGiveSameBonds) {
  auto split = make_spec(4, 3);
  auto combined = split;
  combined.coupling = oqs::Coupling::kCombined;
  for (auto kind : {Topology::kChain, Topology::kFork, Topology::kStar})
    EXPECT_EQ(build_ttno(oqs::hamiltonian(kind, split)).bond_dimensions(),
              build_ttno(oqs::hamiltonian(kind, combined)).bond_dimensions());
}

// ---------------------------------------------------------------------------

TEST(ExplicitChainMatrices, FixtureStructure) {
  const auto spec = make_spec(3, 2);
  const auto f = oqs::explicit_chain_matrices(spec);
  ASSERT_EQ(f.size(), 9u);
  // Interior spin: I, -JX, -JY, -JZ in the first column, Z X Y Z I in the last row.
  const auto &spin = f[3];
  EXPECT_EQ(spin.rows, 5u);
  EXPECT_EQ(spin.cols, 6u);
  EXPECT_EQ(spin.nonzeros(), 9u);
  EXPECT_LT(max_abs_diff(spin.at(1, 0), -0.7 * ops::pauli_x()), 1e-15);
  EXPECT_LT(max_abs_diff(spin.at(4, 5), ops::identity(2)), 1e-15);
  // Interior boson: identity diagonal, coupling and number operator in column 0.
  const auto &boson = f[1];
  EXPECT_EQ(boson.rows, 6u);
  EXPECT_EQ(boson.cols, 6u);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_LT(max_abs_diff(boson.at(k, k), ops::identity(2)), 1e-15);
  EXPECT_EQ(boson.nonzeros(), 8u);
  EXPECT_LT(max_abs_diff(boson.at(5, 0), 1.25 * ops::number(2)), 1e-15);
  const DenseMatrix gb = spec.g * ops::annihilation(2) + std::conj(spec.g) * ops::creation(2);
  EXPECT_LT(max_abs_diff(boson.at(1, 0), gb), 1e-15);
  EXPECT_EQ(f[2].cols, 5u);
  // Boundaries: first spin is a row vector, last boson a column vector.
  EXPECT_EQ(f.front().rows, 1u);
  EXPECT_EQ(f.back().cols, 1u);
}

TEST(ExplicitChainMatrices, ChainTensorsMatchUpToBondPermutation) {
  for (int N = 2; N <= 4; ++N)
    for (int M = 1; M <= 3; ++M) {
      const auto spec = make_spec(N, M, 3);
      const auto ttno = build_ttno(oqs::hamiltonian(Topology::kChain, spec));
      const auto got = oqs::chain_matrices(ttno, oqs::chain_order(spec));
      const auto expect = oqs::prune_dead_bonds(oqs::explicit_chain_matrices(spec));
      const auto perms = oqs::match_up_to_bond_permutation(expect, got);
      ASSERT_TRUE(perms.has_value()) << "N=" << N << " M=" << M;
      EXPECT_EQ(perms->size(), got.size() - 1);
    }
}

TEST(ExplicitChainMatrices, SearchRejectsPerturbedTensors) {
  const auto spec = make_spec(3, 2);
  auto got = oqs::chain_matrices(build_ttno(oqs::hamiltonian(Topology::kChain, spec)), oqs::chain_order(spec));
  const auto expect = oqs::prune_dead_bonds(oqs::explicit_chain_matrices(spec));
  ASSERT_TRUE(oqs::match_up_to_bond_permutation(expect, got).has_value());
  got[4].at(0, 0)(0, 0) += 1e-6;
  EXPECT_FALSE(oqs::match_up_to_bond_permutation(expect, got).has_value());
}

TEST(ExplicitChainMatrices, PruneRemovesDeadFirstSpinColumn) {
  const auto spec = make_spec(3, 2);
  const auto raw = oqs::explicit_chain_matrices(spec);
  const auto pruned = oqs::prune_dead_bonds(raw);
  EXPECT_EQ(raw.front().cols, 6u);
  EXPECT_EQ(pruned.front().cols, 5u);
}

// ---------------------------------------------------------------------------

// Dense element counts: the fork layout wins from two baths per spin on; with
// a single bath the (5, 5, 3) spin tensors outweigh the chain's (5, 6) + (6, 5).
TEST(ElementCounts, ForkVersusChain) {
  for (int N = 2; N <= 8; ++N)
    for (int M = 1; M <= 6; ++M) {
      const auto spec = make_spec(N, M);
      const auto ftp = element_count(build_ttno(oqs::hamiltonian(Topology::kFork, spec)));
      const auto chain = element_count(build_ttno(oqs::hamiltonian(Topology::kChain, spec)));
      if (M >= 2 || N == 2)
        EXPECT_LT(ftp, chain) << "N=" << N << " M=" << M;
      else
        EXPECT_GT(ftp, chain) << "N=" << N << " M=" << M;
    }
}

TEST(ElementCounts, ForkSingleBathIsAlreadyOptimal) {
  // The fork bonds at M = 1 equal the operator Schmidt ranks, so no
  // construction can make that layout smaller.
  const auto spec = make_spec(4, 1);
  const auto h = oqs::hamiltonian(Topology::kFork, spec);
  const auto opt = optimal_bond_dims(h);
  for (auto &[e, dim] : build_ttno(h).bond_dimensions()) EXPECT_EQ(dim, opt.at(e)) << e;
  EXPECT_EQ(element_count(build_ttno(h)), 768u);
  EXPECT_EQ(element_count(build_ttno(oqs::hamiltonian(Topology::kChain, spec))), 672u);
}

TEST(ElementCounts, StarSpinTensorGrowsExponentiallyInBaths) {
  std::size_t prev = 0;
  for (int M = 1; M <= 6; ++M) {
    const auto spec = make_spec(3, M);
    const auto ttno = build_ttno(oqs::hamiltonian(Topology::kStar, spec));
    const std::size_t n = tensor_elements(ttno.at(oqs::spin_site(spec, 1)));
    // Two spin legs of 5, M boson legs of 3, 2 x 2 physical.
    std::size_t expect = 5 * 5 * 4;
    for (int b = 0; b < M; ++b) expect *= 3;
    EXPECT_EQ(n, expect);
    if (prev) EXPECT_EQ(n, 3 * prev);
    prev = n;
  }
}

}  // namespace
