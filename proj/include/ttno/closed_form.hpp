// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_CLOSED_FORM_HPP
#define TTNO_CLOSED_FORM_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttno/common.hpp"
#include "ttno/hamiltonian.hpp"
#include "ttno/operators.hpp"
#include "ttno/tree.hpp"
#include "ttno/ttno.hpp"

namespace ttno {

// ---------------------------------------------------------------------------
// Nearest-neighbour Hamiltonians: sum over tree edges of A^[s] A^[s'] plus
// optional single-site fields Z_s.
// ---------------------------------------------------------------------------

struct NNInteraction {
  /// Per edge: (operator on edge.a, operator on edge.b).
  std::map<Edge, std::pair<SiteOperator, SiteOperator>> edge_ops;
  std::map<SiteId, SiteOperator> fields;

  /// Same operator pair on every edge, optionally the same field on every site.
  static NNInteraction uniform(const TreeTopology &t, const std::string &label,
                               const std::optional<std::string> &field = std::nullopt) {
    NNInteraction nn;
    for (const Edge &e : t.edges())
      nn.edge_ops.emplace(e, std::make_pair(SiteOperator(label, t.phys_dim(e.a)), SiteOperator(label, t.phys_dim(e.b))));
    if (field)
      for (SiteId s : t.nodes()) nn.fields.emplace(s, SiteOperator(*field, t.phys_dim(s)));
    return nn;
  }

  /// Operator acting on `at` in the term of edge (at, other).
  const SiteOperator &op(SiteId at, SiteId other) const {
    auto it = edge_ops.find(Edge(at, other));
    if (it == edge_ops.end())
      throw InputError("interaction misses edge " + Edge(at, other).to_string());
    return at == it->first.a ? it->second.first : it->second.second;
  }

  void validate(const TreeTopology &t) const {
    for (const Edge &e : t.edges())
      if (!edge_ops.count(e)) throw InputError("interaction misses edge " + e.to_string());
    for (auto &[e, ops] : edge_ops) {
      if (!t.contains(e.a) || !t.contains(e.b) || t.edge_index(e.a, e.b) >= t.num_edges())
        throw InputError("interaction names " + e.to_string() + " which is not a tree edge");
      if (ops.first.dim() != t.phys_dim(e.a) || ops.second.dim() != t.phys_dim(e.b))
        throw ValidationError("interaction operator dimension mismatch on edge " + e.to_string());
    }
    for (auto &[s, z] : fields) {
      if (!t.contains(s)) throw InputError("field on unknown site " + std::to_string(s.value));
      if (z.dim() != t.phys_dim(s)) throw ValidationError("field dimension mismatch on site " + std::to_string(s.value));
    }
  }

  std::vector<ProductTerm> terms() const {
    std::vector<ProductTerm> out;
    for (auto &[e, ops] : edge_ops) out.emplace_back(Complex(1.0), std::map<SiteId, SiteOperator>{{e.a, ops.first}, {e.b, ops.second}});
    for (auto &[s, z] : fields) out.emplace_back(Complex(1.0), std::map<SiteId, SiteOperator>{{s, z}});
    return out;
  }
};

inline Hamiltonian nn_hamiltonian(const TreeTopology &t, const NNInteraction &nn, OperatorRegistry reg = {}) {
  nn.validate(t);
  return Hamiltonian(t, nn.terms(), std::move(reg));
}

/// Closed-form TTNO of a nearest-neighbour Hamiltonian.
///
/// Bond values on the edge to the parent: 0 = identity below, 1 = the
/// parent-edge operator sits at this site, 2 = a term is complete below.
/// Bonds into leaves without a field keep only values {0, 1}.
inline TTNO nn_ttno(const TreeTopology &t, const NNInteraction &nn, const OperatorRegistry &reg = {}) {
  nn.validate(t);
  if (t.size() > 2 && t.neighbour_indices(t.root_index()).size() == 1)
    throw InputError("closed-form nearest-neighbour TTNO needs a root that is not a leaf");
  auto field = [&](std::size_t i) -> std::optional<DenseMatrix> {
    auto it = nn.fields.find(t.site(i));
    if (it == nn.fields.end()) return std::nullopt;
    return reg.resolve(it->second);
  };
  auto bond_dim = [&](std::size_t child) -> std::size_t {
    if (!t.children_indices(child).empty()) return 3;
    return field(child) ? 3 : 2;
  };

  std::map<SiteId, TTNOTensor> tensors;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const SiteId s = t.site(i);
    const int d = t.phys_dim_at(i);
    const DenseMatrix id = ops::identity(d);
    const auto legs_nb = leg_neighbours(t, i);
    std::vector<Leg> legs;
    for (std::size_t nb : legs_nb) {
      const std::size_t child = t.parent_index(i) == nb ? i : nb;
      legs.push_back(Leg{Edge(s, t.site(nb)), bond_dim(child)});
    }
    TTNOTensor ten(s, legs, d);
    const bool has_parent = t.parent_index(i) != TreeTopology::npos;
    const std::size_t first_child = has_parent ? 1 : 0;
    std::vector<std::size_t> idx(legs.size(), 0);
    auto at = [&](std::size_t p, std::optional<std::size_t> child_leg, std::size_t child_value) {
      std::fill(idx.begin(), idx.end(), 0);
      if (has_parent) idx[0] = p;
      if (child_leg) idx[*child_leg] = child_value;
      return idx;
    };
    const auto z = field(i);
    if (has_parent) {
      const SiteId parent = t.site(t.parent_index(i));
      ten.set_slice(at(0, std::nullopt, 0), id);
      ten.set_slice(at(1, std::nullopt, 0), reg.resolve(nn.op(s, parent)));
      if (z) ten.set_slice(at(2, std::nullopt, 0), *z);
    } else if (z) {
      ten.set_slice(at(0, std::nullopt, 0), *z);
    }
    for (std::size_t k = first_child; k < legs.size(); ++k) {
      const SiteId child = t.site(legs_nb[k]);
      const std::size_t p = has_parent ? 2 : 0;
      ten.set_slice(at(p, k, 1), reg.resolve(nn.op(s, child)));
      if (legs[k].dim == 3) ten.set_slice(at(p, k, 2), id);
    }
    tensors.emplace(s, std::move(ten));
  }
  return TTNO(t, std::move(tensors));
}

// ---------------------------------------------------------------------------
// Full Cayley trees and long-range bond-dimension counting.
// ---------------------------------------------------------------------------

struct CayleyTreeSpec {
  int degree = 2;  // kappa
  int depth = 1;   // D

  void validate() const {
    if (degree < 2) throw InputError("Cayley tree degree must be >= 2");
    if (depth < 1) throw InputError("Cayley tree depth must be >= 1");
  }
};

/// Root 0; nodes numbered breadth-first; every non-leaf has degree kappa.
inline TreeTopology cayley_tree(const CayleyTreeSpec &spec) {
  spec.validate();
  std::vector<Edge> edges;
  std::vector<std::uint32_t> frontier{0};
  std::uint32_t next = 1;
  for (int level = 1; level <= spec.depth; ++level) {
    std::vector<std::uint32_t> grown;
    for (std::uint32_t p : frontier) {
      const int kids = level == 1 ? spec.degree : spec.degree - 1;
      for (int k = 0; k < kids; ++k) {
        edges.emplace_back(SiteId(p), SiteId(next));
        grown.push_back(next++);
      }
    }
    frontier = std::move(grown);
  }
  return TreeTopology::from_edges(edges, SiteId(0));
}

inline std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

/// Node count of the constructed tree: 1 + sum_{l=1}^{D} kappa (kappa-1)^(l-1).
inline std::uint64_t cayley_site_count(const CayleyTreeSpec &spec) {
  spec.validate();
  std::uint64_t n = 1;
  for (int l = 1; l <= spec.depth; ++l) n += static_cast<std::uint64_t>(spec.degree) * ipow(spec.degree - 1, l - 1);
  return n;
}

/// The site-count expression with a level-independent summand,
/// 1 + D kappa (kappa-1)^(D-1); kept for comparison only.
inline std::uint64_t cayley_site_count_uncorrected(const CayleyTreeSpec &spec) {
  spec.validate();
  return 1 + static_cast<std::uint64_t>(spec.depth) * static_cast<std::uint64_t>(spec.degree) *
                 ipow(spec.degree - 1, spec.depth - 1);
}

/// Sites of one root-child subtree at distance R from the root.
inline std::uint64_t cayley_shell_count(const CayleyTreeSpec &spec, int R) {
  spec.validate();
  if (R < 1 || R > 2 * spec.depth - 1) throw InputError("shell radius must lie in [1, 2D-1]");
  return R <= spec.depth ? ipow(spec.degree - 1, R - 1) : 0;
}

/// Shell count by explicit construction (first root child).
inline std::uint64_t brute_force_shell_count(const CayleyTreeSpec &spec, int R) {
  const TreeTopology t = cayley_tree(spec);
  const auto dist = distances_from(t, t.root());
  const auto sub = subtree(t, t.children(t.root()).front());
  std::uint64_t n = 0;
  for (SiteId v : sub) n += dist[t.index_of(v)] == R;
  return n;
}

/// Left-hand side of the different-subtree pair identity, summed term by term.
inline std::uint64_t pair_count_sum(int kappa, int chi) {
  std::uint64_t total = 0;
  for (int delta = 1; delta <= chi - 1; ++delta) total += ipow(kappa - 1, delta - 1) * ipow(kappa - 1, chi - delta - 1);
  return total;
}

/// (chi-1)(kappa-1)^(chi-2), with the empty case chi = 1 equal to 0.
inline std::uint64_t pair_count_closed(int kappa, int chi) {
  if (chi <= 1) return 0;
  return static_cast<std::uint64_t>(chi - 1) * ipow(kappa - 1, chi - 2);
}

/// Pairs in two given different root-child subtrees at distance chi, for
/// chi > D: sum_{delta=chi-D}^{D} (kappa-1)^(chi-2) = (2D-chi+1)(kappa-1)^(chi-2).
inline std::uint64_t far_pair_count(const CayleyTreeSpec &spec, int chi) {
  const int lo = std::max(1, chi - spec.depth), hi = std::min(spec.depth, chi - 1);
  return hi < lo ? 0 : static_cast<std::uint64_t>(hi - lo + 1) * ipow(spec.degree - 1, chi - 2);
}

/// Root bond dimension for interactions of range exactly chi:
/// 2 + chi (kappa-1)^(chi-1) for chi <= D, 2 + (2D-chi+1)(kappa-1)^(chi-1) above.
inline std::uint64_t fixed_range_bond_bound(const CayleyTreeSpec &spec, int chi) {
  spec.validate();
  if (chi < 1 || chi > 2 * spec.depth - 1) throw InputError("interaction range must lie in [1, 2D-1]");
  const std::uint64_t k1 = static_cast<std::uint64_t>(spec.degree - 1);
  if (chi <= spec.depth) return 2 + static_cast<std::uint64_t>(chi) * ipow(k1, chi - 1);
  return 2 + static_cast<std::uint64_t>(2 * spec.depth - chi + 1) * ipow(k1, chi - 1);
}

/// The uncorrected chi > D count: (2D-chi)(kappa-1)^(chi-2) theta(chi-2D)
/// between two subtrees, theta(0) = 1. Returns the resulting root bond.
inline std::uint64_t fixed_range_bond_bound_uncorrected(const CayleyTreeSpec &spec, int chi) {
  spec.validate();
  if (chi <= spec.depth) return fixed_range_bond_bound(spec, chi);
  const long long factor = 2LL * spec.depth - chi;
  const long long pairs = chi >= 2 * spec.depth ? factor * static_cast<long long>(ipow(spec.degree - 1, chi - 2)) : 0;
  return static_cast<std::uint64_t>(2 + static_cast<long long>(spec.degree - 1) * pairs);
}

namespace detail {

/// Max over root edges of (#unordered pairs crossing that edge with
/// lo <= distance <= hi) + 2.
inline std::uint64_t crossing_pairs_root_bond(const TreeTopology &t, int lo, int hi) {
  std::uint64_t best = 0;
  for (SiteId child : t.children(t.root())) {
    const auto sub = subtree(t, child);
    std::vector<char> inside(t.size(), 0);
    for (SiteId v : sub) inside[t.index_of(v)] = 1;
    std::uint64_t count = 0;
    for (SiteId v : sub) {
      const auto dist = distances_from(t, v);
      for (std::size_t w = 0; w < t.size(); ++w)
        if (!inside[w] && dist[w] >= lo && dist[w] <= hi) ++count;
    }
    best = std::max(best, count + 2);
  }
  return best;
}

}  // namespace detail

/// Exhaustive pair count for range exactly chi on the constructed tree.
inline std::uint64_t brute_force_root_bond(const CayleyTreeSpec &spec, int chi) {
  if (chi < 1) throw InputError("interaction range must be >= 1");
  return detail::crossing_pairs_root_bond(cayley_tree(spec), chi, chi);
}

/// Exhaustive pair count for all ranges 1..2D-1.
inline std::uint64_t brute_force_all_to_all_root_bond(const CayleyTreeSpec &spec) {
  return detail::crossing_pairs_root_bond(cayley_tree(spec), 1, 2 * spec.depth - 1);
}

/// Root bond for all-to-all interactions up to range 2D-1 (trivial states counted once).
inline std::uint64_t all_to_all_bound(const CayleyTreeSpec &spec) {
  spec.validate();
  std::uint64_t total = 2;
  for (int chi = 1; chi <= 2 * spec.depth - 1; ++chi) total += fixed_range_bond_bound(spec, chi) - 2;
  return total;
}

/// 2 + sum_{chi<=D} chi (kappa-1)^(chi-1) + sum_{D<chi<2D} (2D-chi)(kappa-1)^(chi-1), uncorrected.
inline std::uint64_t all_to_all_bound_uncorrected(const CayleyTreeSpec &spec) {
  spec.validate();
  const std::uint64_t k1 = static_cast<std::uint64_t>(spec.degree - 1);
  std::uint64_t total = 2;
  for (int chi = 1; chi <= spec.depth; ++chi) total += static_cast<std::uint64_t>(chi) * ipow(k1, chi - 1);
  for (int chi = spec.depth + 1; chi <= 2 * spec.depth - 1; ++chi)
    total += static_cast<std::uint64_t>(2 * spec.depth - chi) * ipow(k1, chi - 1);
  return total;
}

/// Pairwise-distinct operators: the term on (s, s') acts with "A<s>_<s'>" on s.
inline Hamiltonian cayley_long_range_hamiltonian(const CayleyTreeSpec &spec, int lo, int hi) {
  const TreeTopology t = cayley_tree(spec);
  std::vector<ProductTerm> terms;
  for (SiteId s : t.nodes()) {
    const auto dist = distances_from(t, s);
    for (std::size_t w = 0; w < t.size(); ++w) {
      const SiteId s2 = t.site(w);
      if (!(s < s2) || dist[w] < lo || dist[w] > hi) continue;
      auto name = [](SiteId x, SiteId y) { return "A" + std::to_string(x.value) + "_" + std::to_string(y.value); };
      terms.emplace_back(Complex(1.0), std::map<SiteId, SiteOperator>{{s, SiteOperator(name(s, s2), 2)},
                                                                      {s2, SiteOperator(name(s2, s), 2)}});
    }
  }
  return Hamiltonian(t, std::move(terms));
}

}  // namespace ttno

#endif  // TTNO_CLOSED_FORM_HPP
