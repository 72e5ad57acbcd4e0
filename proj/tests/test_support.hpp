// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_TESTS_TEST_SUPPORT_HPP
#define TTNO_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ttno/common.hpp"
#include "ttno/hamiltonian.hpp"
#include "ttno/operators.hpp"
#include "ttno/tree.hpp"

namespace ttno::testing {

inline SiteId S(std::uint32_t v) { return SiteId(v); }

inline std::vector<Edge> toy_edges() {
  return {{S(1), S(2)}, {S(2), S(3)}, {S(2), S(4)}, {S(1), S(5)}, {S(5), S(6)}, {S(5), S(7)}, {S(7), S(8)}};
}

inline TreeTopology toy_tree(std::uint32_t root = 1) { return TreeTopology::from_edges(toy_edges(), S(root)); }

inline ProductTerm term(std::vector<std::pair<std::uint32_t, std::string>> factors, Complex c = 1.0, int dim = 2) {
  ProductTerm t;
  t.coefficient = c;
  for (auto &[s, l] : factors) t.factors.emplace(S(s), SiteOperator(l, dim));
  return t;
}

/// Y2 X3 X4 + X1 Y2 Y6 + X1 Y2 Z5 + Z5 X7 X8
inline std::vector<ProductTerm> toy_terms() {
  return {term({{2, "Y"}, {3, "X"}, {4, "X"}}), term({{1, "X"}, {2, "Y"}, {6, "Y"}}),
          term({{1, "X"}, {2, "Y"}, {5, "Z"}}), term({{5, "Z"}, {7, "X"}, {8, "X"}})};
}

inline Hamiltonian toy_hamiltonian(std::uint32_t root = 1) { return Hamiltonian(toy_tree(root), toy_terms()); }

/// Element-wise dense oracle: H(i, j) = sum_terms c * prod_k M_k(i_k, j_k),
/// digits of i and j taken in `ordering` with the first site most significant.
inline DenseMatrix elementwise_dense(const Hamiltonian &h, const std::vector<SiteId> &ordering) {
  const auto &t = h.tree();
  std::vector<int> d;
  std::size_t dim = 1;
  for (SiteId s : ordering) {
    d.push_back(t.phys_dim(s));
    dim *= static_cast<std::size_t>(t.phys_dim(s));
  }
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<int> di(ordering.size()), dj(ordering.size());
  for (auto &term : h.terms()) {
    std::vector<DenseMatrix> m;
    for (SiteId s : ordering) {
      auto it = term.factors.find(s);
      m.push_back(it == term.factors.end() ? DenseMatrix(DenseMatrix::Identity(t.phys_dim(s), t.phys_dim(s)))
                                           : h.registry().resolve(it->second));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      std::size_t r = i;
      for (std::size_t k = ordering.size(); k-- > 0;) {
        di[k] = static_cast<int>(r % static_cast<std::size_t>(d[k]));
        r /= static_cast<std::size_t>(d[k]);
      }
      for (std::size_t j = 0; j < dim; ++j) {
        std::size_t c = j;
        for (std::size_t k = ordering.size(); k-- > 0;) {
          dj[k] = static_cast<int>(c % static_cast<std::size_t>(d[k]));
          c /= static_cast<std::size_t>(d[k]);
        }
        Complex v = term.coefficient;
        for (std::size_t k = 0; k < ordering.size() && v != Complex(0.0); ++k) v *= m[k](di[k], dj[k]);
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
      }
    }
  }
  return out;
}

/// Random labelled tree: node k attaches to a uniform earlier node, ids shuffled.
inline TreeTopology random_tree(std::size_t n, std::mt19937_64 &rng, std::map<SiteId, int> dims = {}) {
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    edges.emplace_back(S(ids[k]), S(ids[pick(rng)]));
  }
  std::vector<SiteId> nodes;
  for (auto v : ids) nodes.push_back(S(v));
  std::sort(nodes.begin(), nodes.end());
  std::uniform_int_distribution<std::size_t> root_pick(0, n - 1);
  return TreeTopology(nodes, edges, S(ids[root_pick(rng)]), dims);
}

/// A random tree whose root has at least two neighbours (when n >= 3).
inline TreeTopology random_tree_nonleaf_root(std::size_t n, std::mt19937_64 &rng) {
  TreeTopology t = random_tree(n, rng);
  if (n < 3) return t;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.neighbour_indices(i).size() >= 2) return t.rerooted(t.site(i));
  return t;
}

/// Max absolute element-wise difference.
inline double max_abs_diff(const DenseMatrix &a, const DenseMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return 1e300;
  return (a - b).cwiseAbs().maxCoeff();
}

/// Sorted multiset of folded term keys.
inline std::vector<std::string> folded_keys(const Hamiltonian &h) {
  std::vector<std::string> k;
  for (auto &t : h.folded_terms()) k.push_back(t.key());
  std::sort(k.begin(), k.end());
  return k;
}

}  // namespace ttno::testing

#endif  // TTNO_TESTS_TEST_SUPPORT_HPP
