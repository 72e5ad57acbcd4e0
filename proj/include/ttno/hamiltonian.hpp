// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_HAMILTONIAN_HPP
#define TTNO_HAMILTONIAN_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ttno/common.hpp"
#include "ttno/operators.hpp"
#include "ttno/tree.hpp"

namespace ttno {

/// coefficient * (tensor product of factors); absent sites act as identity.
struct ProductTerm {
  Complex coefficient{1.0, 0.0};
  std::map<SiteId, SiteOperator> factors;

  ProductTerm() = default;
  ProductTerm(Complex c, std::map<SiteId, SiteOperator> f) : coefficient(c), factors(std::move(f)) {}

  /// Factor at `s`, or the identity of dimension `dim` when absent.
  SiteOperator factor_or_identity(SiteId s, int dim) const {
    auto it = factors.find(s);
    return it == factors.end() ? SiteOperator::identity(dim) : it->second;
  }

  /// Canonical symbolic key: "site:label/dim;..." (coefficient excluded).
  std::string key() const {
    std::string k;
    for (auto &[s, op] : factors)
      k += std::to_string(s.value) + ":" + op.label() + "/" + std::to_string(op.dim()) + ";";
    return k;
  }

  friend bool operator==(const ProductTerm &x, const ProductTerm &y) {
    return x.coefficient == y.coefficient && x.factors == y.factors;
  }
};

/// Absorb the coefficient into the factor at the smallest acted-on site.
///
/// The all-identity term gets an explicit scaled identity at `root`.
inline ProductTerm fold_coefficient(const ProductTerm &term, SiteId root, int root_dim) {
  if (term.coefficient == Complex(1.0, 0.0)) return term;
  ProductTerm out = term;
  out.coefficient = 1.0;
  if (out.factors.empty()) {
    out.factors.emplace(root, SiteOperator::identity(root_dim).scaled(term.coefficient));
  } else {
    auto &first = out.factors.begin()->second;
    first = first.scaled(term.coefficient);
  }
  return out;
}

/// H = sum of product terms on a tree, with a registry for the numerics.
class Hamiltonian {
 public:
  Hamiltonian() = default;

  /// Validates every term against the tree; rejects identity factors, zero
  /// coefficients and terms that coincide after coefficient folding.
  Hamiltonian(TreeTopology tree, std::vector<ProductTerm> terms, OperatorRegistry registry = {})
      : tree_(std::move(tree)), terms_(std::move(terms)), registry_(std::move(registry)) {
    std::set<std::string> seen;
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      auto &t = terms_[j];
      if (t.coefficient == Complex(0.0, 0.0))
        throw ValidationError("term " + std::to_string(j) + " has a zero coefficient");
      for (auto &[s, op] : t.factors) {
        if (!tree_.contains(s))
          throw ValidationError("term " + std::to_string(j) + " acts on site " +
                                std::to_string(s.value) + " which is not in the tree");
        if (op.is_identity())
          throw ValidationError("term " + std::to_string(j) + " carries an explicit identity factor");
        if (op.dim() != tree_.phys_dim(s))
          throw ValidationError("term " + std::to_string(j) + " has a factor of dimension " +
                                std::to_string(op.dim()) + " on site " + std::to_string(s.value) +
                                " of dimension " + std::to_string(tree_.phys_dim(s)));
      }
      if (!seen.insert(folded(j).key()).second)
        throw DuplicateTermError("term " + std::to_string(j) + " duplicates an earlier term");
    }
  }

  const TreeTopology &tree() const { return tree_; }
  const std::vector<ProductTerm> &terms() const { return terms_; }
  const OperatorRegistry &registry() const { return registry_; }
  std::size_t size() const { return terms_.size(); }

  ProductTerm folded(std::size_t j) const {
    return fold_coefficient(terms_[j], tree_.root(), tree_.phys_dim(tree_.root()));
  }
  std::vector<ProductTerm> folded_terms() const {
    std::vector<ProductTerm> out;
    out.reserve(terms_.size());
    for (std::size_t j = 0; j < terms_.size(); ++j) out.push_back(folded(j));
    return out;
  }

  /// Same terms on a re-rooted copy of the tree.
  Hamiltonian with_tree(TreeTopology tree) const { return Hamiltonian(std::move(tree), terms_, registry_); }

 private:
  TreeTopology tree_;
  std::vector<ProductTerm> terms_;
  OperatorRegistry registry_;
};

/// Product of physical dimensions, or throws CapExceededError above `cap`.
inline std::size_t checked_hilbert_dim(const TreeTopology &t, const std::vector<SiteId> &ordering,
                                       std::size_t cap) {
  if (ordering.size() != t.size()) throw InputError("site ordering must list every site exactly once");
  std::vector<SiteId> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != t.nodes()) throw InputError("site ordering must list every site exactly once");
  std::size_t dim = 1;
  for (SiteId s : ordering) {
    dim *= static_cast<std::size_t>(t.phys_dim(s));
    if (dim > cap)
      throw CapExceededError("Hilbert-space dimension exceeds the dense cap of " + std::to_string(cap) +
                             " (set TTNO_DENSE_CAP to raise it)");
  }
  return dim;
}

inline DenseMatrix kron(const DenseMatrix &a, const DenseMatrix &b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Dense matrix of one product term, Kronecker factors in `ordering`.
inline DenseMatrix term_to_dense(const ProductTerm &term, const TreeTopology &t,
                                 const std::vector<SiteId> &ordering, const OperatorRegistry &reg) {
  DenseMatrix out = DenseMatrix::Identity(1, 1) * term.coefficient;
  for (SiteId s : ordering) {
    auto it = term.factors.find(s);
    const int d = t.phys_dim(s);
    out = kron(out, it == term.factors.end() ? ops::identity(d) : reg.resolve(it->second));
  }
  return out;
}

/// Sum over terms of coefficient * Kronecker product in `ordering`.
inline DenseMatrix to_dense(const Hamiltonian &h, const std::vector<SiteId> &ordering,
                            std::size_t cap = dense_cap()) {
  const std::size_t dim = checked_hilbert_dim(h.tree(), ordering, cap);
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  for (auto &term : h.terms()) out += term_to_dense(term, h.tree(), ordering, h.registry());
  return out;
}

inline DenseMatrix to_dense(const Hamiltonian &h) { return to_dense(h, h.tree().preorder()); }

/// Portable uniform integer in [0, n) from a 64-bit engine.
inline std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

/// Number of distinct product terms with 1..max_support non-trivial factors
/// drawn from `n_labels` labels on `n_sites` sites; saturates at UINT64_MAX.
inline std::uint64_t distinct_term_count(std::size_t n_sites, std::size_t n_labels, std::size_t max_support) {
  const std::uint64_t sat = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, k)
  std::uint64_t power = 1;  // labels^k
  for (std::size_t k = 1; k <= std::min(max_support, n_sites); ++k) {
    binom = binom * (n_sites - k + 1) / k;
    if (power > sat / n_labels) return sat;
    power *= n_labels;
    if (binom != 0 && power > sat / binom) return sat;
    std::uint64_t c = binom * power;
    if (total > sat - c) return sat;
    total += c;
  }
  return total;
}

/// Random Hamiltonian with pairwise distinct unit-coefficient terms.
///
/// Support size k is drawn with probability proportional to C(n, k) for
/// 1 <= k <= max_support (so the support is a uniform non-empty subset of
/// size <= max_support), then each supported site gets a uniform label.
inline Hamiltonian random_hamiltonian(const TreeTopology &tree, std::size_t n_terms,
                                      const std::vector<std::string> &op_labels, std::size_t max_support,
                                      std::uint64_t seed, OperatorRegistry registry = {}) {
  if (n_terms < 1) throw InputError("random_hamiltonian needs at least one term");
  if (op_labels.empty()) throw InputError("random_hamiltonian needs at least one operator label");
  for (auto &l : op_labels)
    if (l == kIdentityLabel) throw InputError("random_hamiltonian labels must not include the identity");
  const std::size_t n = tree.size();
  max_support = std::min(max_support, n);
  if (max_support < 1) throw InputError("max_support must be >= 1");
  if (n_terms > distinct_term_count(n, op_labels.size(), max_support))
    throw InputError("requested " + std::to_string(n_terms) + " distinct terms but only " +
                     std::to_string(distinct_term_count(n, op_labels.size(), max_support)) + " exist");

  // Cumulative weights C(n, k), k = 1..max_support, in doubles; exact enough
  // for tree sizes where dense oracles are meaningful.
  std::vector<double> weight(max_support);
  double binom = 1;
  for (std::size_t k = 1; k <= max_support; ++k) {
    binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
    weight[k - 1] = binom;
  }
  std::mt19937_64 rng(seed);
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);

  std::vector<ProductTerm> terms;
  std::set<std::string> seen;
  while (terms.size() < n_terms) {
    // Support size.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    std::size_t k = 1;
    for (double acc = weight[0]; k < max_support && u >= acc; ++k) acc += weight[k];
    // Uniform k-subset by partial Fisher-Yates.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + uniform_below(rng, n - i)]);
    ProductTerm term;
    std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < k; ++i) {
      SiteId s = tree.site(idx[i]);
      const auto &label = op_labels[uniform_below(rng, op_labels.size())];
      term.factors.emplace(s, SiteOperator(label, tree.phys_dim(s)));
    }
    if (seen.insert(term.key()).second) terms.push_back(std::move(term));
  }
  return Hamiltonian(tree, std::move(terms), std::move(registry));
}

}  // namespace ttno

#endif  // TTNO_HAMILTONIAN_HPP
