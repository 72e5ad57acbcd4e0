// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_OQS_HPP
#define TTNO_OQS_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ttno/common.hpp"
#include "ttno/hamiltonian.hpp"
#include "ttno/operators.hpp"
#include "ttno/tree.hpp"
#include "ttno/ttno.hpp"

namespace ttno::oqs {

// Heisenberg spin chain coupled to independent truncated bosonic modes:
//   H = -J sum_s (X_s X_{s+1} + Y_s Y_{s+1} + Z_s Z_{s+1})
//     + sum_{s,b} (g Z_s B_{s,b} + h.c.) + omega sum_{s,b} N_{s,b}

enum class Topology { kChain, kFork, kStar };

/// How g Z B + h.c. enters the term list.
enum class Coupling {
  kCombined,  ///< one term Z (x) (g B + conj(g) Bdag) per spin-boson pair
  kSplit,     ///< two terms g Z (x) B and conj(g) Z (x) Bdag
};

struct Spec {
  int spins = 1;
  int baths = 0;
  double J = 1.0;
  Complex g{1.0, 0.0};
  double omega = 1.0;
  int boson_dim = 2;
  Coupling coupling = Coupling::kSplit;
  /// Spin factor of the spin-boson coupling carries its own label (with the
  /// Z matrix) so it is never matched with the Heisenberg Z.
  bool separate_coupling_channel = true;

  void validate() const {
    if (spins < 1) throw InputError("OQS model needs at least one spin");
    if (baths < 0) throw InputError("OQS model needs a non-negative number of baths");
    if (boson_dim < 2) throw InputError("boson truncation dimension must be >= 2");
  }
};

inline std::string to_string(Topology t) {
  switch (t) {
    case Topology::kChain: return "chain";
    case Topology::kFork: return "ftp";
    case Topology::kStar: return "star";
  }
  return "?";
}

inline Topology parse_topology(const std::string &s) {
  if (s == "chain" || s == "mpo") return Topology::kChain;
  if (s == "ftp" || s == "fork") return Topology::kFork;
  if (s == "star") return Topology::kStar;
  throw InputError("unknown topology '" + s + "' (expected chain, ftp or star)");
}

// Site ids follow the chain layout spin 0, its bosons, spin 1, ... read
// from right to left. Every boson therefore has a smaller id than its spin
// and of two neighbouring spins the right one is smaller, so coefficient
// folding puts g on the boson and -J on the right spin.
inline std::uint32_t site_count(const Spec &spec) {
  return static_cast<std::uint32_t>(spec.spins * (spec.baths + 1));
}
inline SiteId spin_site(const Spec &spec, int s) {
  return SiteId(static_cast<std::uint32_t>((spec.spins - 1 - s) * (spec.baths + 1) + spec.baths));
}
inline SiteId boson_site(const Spec &spec, int s, int b) {
  return SiteId(static_cast<std::uint32_t>((spec.spins - 1 - s) * (spec.baths + 1) + spec.baths - 1 - b));
}
inline bool is_spin(const Spec &spec, SiteId id) {
  return static_cast<int>(id.value) % (spec.baths + 1) == spec.baths;
}

inline std::map<SiteId, int> phys_dims(const Spec &spec) {
  std::map<SiteId, int> d;
  for (int s = 0; s < spec.spins; ++s) {
    d[spin_site(spec, s)] = 2;
    for (int b = 0; b < spec.baths; ++b) d[boson_site(spec, s, b)] = spec.boson_dim;
  }
  return d;
}

inline const std::string kCouplingZ = "Zc";

inline std::string spin_coupling_label(const Spec &spec) {
  return spec.separate_coupling_channel ? kCouplingZ : std::string("Z");
}

inline std::string coupling_label(const Spec &spec) {
  return format_scalar(spec.g) + "*B+" + format_scalar(std::conj(spec.g)) + "*Bdag";
}

inline DenseMatrix coupling_matrix(const Spec &spec) {
  return spec.g * ops::annihilation(spec.boson_dim) + std::conj(spec.g) * ops::creation(spec.boson_dim);
}

/// Registry with the combined coupling operator registered.
inline OperatorRegistry registry(const Spec &spec) {
  OperatorRegistry reg;
  reg.add(coupling_label(spec), coupling_matrix(spec));
  reg.add(kCouplingZ, ops::pauli_z());
  return reg;
}

/// Topology independent term list: H_S, then H_SE, then H_E.
inline std::vector<ProductTerm> terms(const Spec &spec) {
  spec.validate();
  const int d = spec.boson_dim;
  std::vector<ProductTerm> out;
  auto pair = [](Complex c, SiteId a, SiteOperator oa, SiteId b, SiteOperator ob) {
    ProductTerm t;
    t.coefficient = c;
    t.factors.emplace(a, std::move(oa));
    t.factors.emplace(b, std::move(ob));
    return t;
  };
  for (int s = 0; s + 1 < spec.spins; ++s)
    for (const char *p : {"X", "Y", "Z"})
      out.push_back(pair(-spec.J, spin_site(spec, s), SiteOperator(p, 2), spin_site(spec, s + 1), SiteOperator(p, 2)));
  for (int s = 0; s < spec.spins; ++s)
    for (int b = 0; b < spec.baths; ++b) {
      const SiteId spin = spin_site(spec, s), boson = boson_site(spec, s, b);
      if (spec.coupling == Coupling::kCombined) {
        out.push_back(pair(1.0, spin, SiteOperator(spin_coupling_label(spec), 2), boson, SiteOperator(coupling_label(spec), d)));
      } else {
        out.push_back(pair(spec.g, spin, SiteOperator(spin_coupling_label(spec), 2), boson, SiteOperator("B", d)));
        out.push_back(pair(std::conj(spec.g), spin, SiteOperator(spin_coupling_label(spec), 2), boson, SiteOperator("Bdag", d)));
      }
    }
  for (int s = 0; s < spec.spins; ++s)
    for (int b = 0; b < spec.baths; ++b) {
      ProductTerm t;
      t.coefficient = spec.omega;
      t.factors.emplace(boson_site(spec, s, b), SiteOperator("N", d));
      out.push_back(std::move(t));
    }
  return out;
}

/// Chain positions, left to right: spin 0, bosons (0,0..M-1), spin 1, ...
inline std::vector<SiteId> chain_order(const Spec &spec) {
  std::vector<SiteId> out;
  for (int s = 0; s < spec.spins; ++s) {
    out.push_back(spin_site(spec, s));
    for (int b = 0; b < spec.baths; ++b) out.push_back(boson_site(spec, s, b));
  }
  return out;
}

/// Matrix-product layout, rooted at the middle of the chain.
inline TreeTopology chain_topology(const Spec &spec) {
  spec.validate();
  auto order = chain_order(spec);
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < order.size(); ++k) edges.emplace_back(order[k - 1], order[k]);
  return TreeTopology(order, edges, order[(order.size() - 1) / 2], phys_dims(spec));
}

/// Spin backbone; each spin carries a pendant chain of its bosons.
inline TreeTopology ftp_topology(const Spec &spec) {
  spec.validate();
  std::vector<Edge> edges;
  for (int s = 0; s < spec.spins; ++s) {
    if (s + 1 < spec.spins) edges.emplace_back(spin_site(spec, s), spin_site(spec, s + 1));
    for (int b = 0; b < spec.baths; ++b)
      edges.emplace_back(b == 0 ? spin_site(spec, s) : boson_site(spec, s, b - 1), boson_site(spec, s, b));
  }
  return TreeTopology(chain_order(spec), edges, spin_site(spec, (spec.spins - 1) / 2), phys_dims(spec));
}

/// Spin backbone; every boson is a leaf attached directly to its spin.
inline TreeTopology star_topology(const Spec &spec) {
  spec.validate();
  std::vector<Edge> edges;
  for (int s = 0; s < spec.spins; ++s) {
    if (s + 1 < spec.spins) edges.emplace_back(spin_site(spec, s), spin_site(spec, s + 1));
    for (int b = 0; b < spec.baths; ++b) edges.emplace_back(spin_site(spec, s), boson_site(spec, s, b));
  }
  return TreeTopology(chain_order(spec), edges, spin_site(spec, (spec.spins - 1) / 2), phys_dims(spec));
}

inline TreeTopology topology(Topology kind, const Spec &spec) {
  switch (kind) {
    case Topology::kChain: return chain_topology(spec);
    case Topology::kFork: return ftp_topology(spec);
    case Topology::kStar: return star_topology(spec);
  }
  throw InputError("unknown topology");
}

inline Hamiltonian hamiltonian(Topology kind, const Spec &spec) {
  return Hamiltonian(topology(kind, spec), terms(spec), registry(spec));
}


// ---------------------------------------------------------------------------
// Reference bond-dimension profiles and explicit MPO matrices.
// ---------------------------------------------------------------------------

/// Expected bond dimensions of one site, legs listed in `edges` order.
struct SiteProfile {
  SiteId site;
  std::vector<Edge> edges;
  std::vector<std::size_t> dims;
};

/// Expected profiles of the non-boundary sites (spins other than the first
/// and last, together with their bosons).
///
/// chain: spins (left, right) = (5, 6); bosons (6, 6), the last of each
/// group (6, 5). ftp: spins (left spin, right spin, first boson) =
/// (5, 5, 3); bosons (3, 3). star: spin-spin 5, spin-boson 3.
inline std::vector<SiteProfile> expected_bond_dims(Topology kind, const Spec &spec) {
  spec.validate();
  if (spec.spins < 3 || spec.baths < 2) throw InputError("profiles need at least 3 spins and 2 baths per spin");
  const int N = spec.spins, M = spec.baths;
  std::vector<SiteProfile> out;
  auto E = [](SiteId a, SiteId b) { return Edge(a, b); };
  switch (kind) {
    case Topology::kChain: {
      const auto order = chain_order(spec);
      const auto pos = [&](SiteId x) { return static_cast<std::size_t>(std::find(order.begin(), order.end(), x) - order.begin()); };
      for (int s = 1; s + 1 < N; ++s) {
        const std::size_t k = pos(spin_site(spec, s));
        out.push_back({order[k], {E(order[k - 1], order[k]), E(order[k], order[k + 1])}, {5, 6}});
      }
      for (int s = 1; s + 1 < N; ++s)
        for (int b = 0; b < M; ++b) {
          const std::size_t k = pos(boson_site(spec, s, b));
          out.push_back({order[k], {E(order[k - 1], order[k]), E(order[k], order[k + 1])}, {6, b + 1 < M ? 6u : 5u}});
        }
      break;
    }
    case Topology::kFork:
      for (int s = 1; s + 1 < N; ++s)
        out.push_back({spin_site(spec, s),
                       {E(spin_site(spec, s - 1), spin_site(spec, s)), E(spin_site(spec, s), spin_site(spec, s + 1)),
                        E(spin_site(spec, s), boson_site(spec, s, 0))},
                       {5, 5, 3}});
      for (int s = 0; s < N; ++s)
        for (int b = 0; b + 1 < M; ++b) {
          const SiteId prev = b == 0 ? spin_site(spec, s) : boson_site(spec, s, b - 1);
          out.push_back({boson_site(spec, s, b),
                         {E(prev, boson_site(spec, s, b)), E(boson_site(spec, s, b), boson_site(spec, s, b + 1))},
                         {3, 3}});
        }
      break;
    case Topology::kStar:
      for (int s = 0; s < N; ++s) {
        SiteProfile p{spin_site(spec, s), {}, {}};
        for (int t : {s - 1, s + 1})
          if (t >= 0 && t < N) {
            p.edges.push_back(E(spin_site(spec, s), spin_site(spec, t)));
            p.dims.push_back(5);
          }
        for (int b = 0; b < M; ++b) {
          p.edges.push_back(E(spin_site(spec, s), boson_site(spec, s, b)));
          p.dims.push_back(3);
        }
        out.push_back(std::move(p));
      }
      break;
  }
  return out;
}

/// Matrix whose entries are d x d operators; rows index the left bond.
struct OperatorMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int dim = 1;
  std::vector<DenseMatrix> entries;  // row-major

  OperatorMatrix() = default;
  OperatorMatrix(std::size_t r, std::size_t c, int d)
      : rows(r), cols(c), dim(d), entries(r * c, DenseMatrix::Zero(d, d)) {}

  DenseMatrix &at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const DenseMatrix &at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

  std::size_t nonzeros() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const DenseMatrix &m) { return !m.isZero(0.0); }));
  }

  OperatorMatrix select(const std::vector<std::size_t> &keep_rows, const std::vector<std::size_t> &keep_cols) const {
    OperatorMatrix out(keep_rows.size(), keep_cols.size(), dim);
    for (std::size_t r = 0; r < keep_rows.size(); ++r)
      for (std::size_t c = 0; c < keep_cols.size(); ++c) out.at(r, c) = at(keep_rows[r], keep_cols[c]);
    return out;
  }
};

/// Explicit MPO matrices, one per chain position (left to right).
inline std::vector<OperatorMatrix> explicit_chain_matrices(const Spec &spec) {
  spec.validate();
  if (spec.baths < 1) throw InputError("explicit MPO matrices need at least one bath per spin");
  const int N = spec.spins, M = spec.baths, d = spec.boson_dim;
  const DenseMatrix I2 = ops::identity(2), Id = ops::identity(d);
  const DenseMatrix X = ops::pauli_x(), Y = ops::pauli_y(), Z = ops::pauli_z();
  const Complex J = spec.J;

  OperatorMatrix spin(5, 6, 2);
  spin.at(0, 0) = I2;
  spin.at(1, 0) = -J * X;
  spin.at(2, 0) = -J * Y;
  spin.at(3, 0) = -J * Z;
  spin.at(4, 1) = Z;
  spin.at(4, 2) = X;
  spin.at(4, 3) = Y;
  spin.at(4, 4) = Z;
  spin.at(4, 5) = I2;

  OperatorMatrix boson(6, 6, d);
  boson.at(0, 0) = Id;
  boson.at(1, 0) = coupling_matrix(spec);
  boson.at(1, 1) = Id;
  for (std::size_t k = 2; k <= 5; ++k) boson.at(k, k) = Id;
  boson.at(5, 0) = spec.omega * ops::number(d);

  OperatorMatrix boson_end(6, 5, d);
  boson_end.at(0, 0) = Id;
  boson_end.at(1, 0) = coupling_matrix(spec);
  for (std::size_t k = 2; k <= 5; ++k) boson_end.at(k, k - 1) = Id;
  boson_end.at(5, 0) = spec.omega * ops::number(d);

  const std::vector<std::size_t> all5{0, 1, 2, 3, 4}, all6{0, 1, 2, 3, 4, 5}, no_heis{0, 1, 5};
  std::vector<OperatorMatrix> out;
  for (int s = 0; s < N; ++s) {
    const bool last = s == N - 1;
    out.push_back(spin.select(s == 0 ? std::vector<std::size_t>{4} : all5, last ? no_heis : all6));
    for (int b = 0; b < M; ++b) {
      if (!last)
        out.push_back(b + 1 < M ? boson : boson_end);
      else if (b + 1 < M)
        out.push_back(boson.select(no_heis, no_heis));
      else
        out.push_back(boson_end.select(no_heis, {0}));
    }
  }
  return out;
}

/// Removes bond indices that are dead: a column of the left matrix or a row
/// of the right matrix that is entirely zero. Repeats until stable.
inline std::vector<OperatorMatrix> prune_dead_bonds(std::vector<OperatorMatrix> chain) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      const auto &l = chain[k];
      const auto &r = chain[k + 1];
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < l.cols; ++j) {
        bool col_zero = true, row_zero = true;
        for (std::size_t i = 0; i < l.rows; ++i) col_zero = col_zero && l.at(i, j).isZero(0.0);
        for (std::size_t c = 0; c < r.cols; ++c) row_zero = row_zero && r.at(j, c).isZero(0.0);
        if (!col_zero && !row_zero) keep.push_back(j);
      }
      if (keep.size() == l.cols) continue;
      std::vector<std::size_t> all_rows(l.rows), all_cols(r.cols);
      std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
      std::iota(all_cols.begin(), all_cols.end(), std::size_t{0});
      chain[k] = l.select(all_rows, keep);
      chain[k + 1] = r.select(keep, all_cols);
      changed = true;
    }
  }
  return chain;
}

/// Chain TTNO tensors as operator-valued matrices, rows = left bond.
inline std::vector<OperatorMatrix> chain_matrices(const TTNO &ttno, const std::vector<SiteId> &order) {
  const auto &t = ttno.tree();
  std::vector<OperatorMatrix> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const TTNOTensor &ten = ttno.at(order[k]);
    std::optional<std::size_t> left_leg, right_leg;
    for (std::size_t l = 0; l < ten.legs().size(); ++l) {
      const SiteId other = ten.legs()[l].edge.other(order[k]);
      if (k > 0 && other == order[k - 1]) left_leg = l;
      else if (k + 1 < order.size() && other == order[k + 1]) right_leg = l;
      else throw InputError("TTNO is not a chain in the given order");
    }
    const std::size_t rows = left_leg ? ten.legs()[*left_leg].dim : 1;
    const std::size_t cols = right_leg ? ten.legs()[*right_leg].dim : 1;
    OperatorMatrix m(rows, cols, t.phys_dim(order[k]));
    std::vector<std::size_t> idx(ten.legs().size());
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        if (left_leg) idx[*left_leg] = r;
        if (right_leg) idx[*right_leg] = c;
        m.at(r, c) = ten.slice(idx);
      }
    out.push_back(std::move(m));
  }
  return out;
}

namespace detail {

inline bool same_entry(const DenseMatrix &a, const DenseMatrix &b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

/// All column permutations q with a(row_perm[i], q[j]) == b(i, j).
inline void column_matches(const OperatorMatrix &a, const OperatorMatrix &b, const std::vector<std::size_t> &row_perm,
                           double tol, std::vector<std::size_t> &q, std::vector<char> &used,
                           std::vector<std::vector<std::size_t>> &found, std::size_t limit) {
  const std::size_t j = q.size();
  if (found.size() >= limit) return;
  if (j == b.cols) {
    found.push_back(q);
    return;
  }
  for (std::size_t c = 0; c < a.cols; ++c) {
    if (used[c]) continue;
    bool ok = true;
    for (std::size_t i = 0; i < b.rows && ok; ++i) ok = same_entry(a.at(row_perm[i], c), b.at(i, j), tol);
    if (!ok) continue;
    used[c] = 1;
    q.push_back(c);
    column_matches(a, b, row_perm, tol, q, used, found, limit);
    q.pop_back();
    used[c] = 0;
  }
}

inline bool chain_search(const std::vector<OperatorMatrix> &a, const std::vector<OperatorMatrix> &b, std::size_t k,
                         const std::vector<std::size_t> &row_perm, double tol,
                         std::vector<std::vector<std::size_t>> &bond_perms) {
  if (k == a.size()) return true;
  std::vector<std::vector<std::size_t>> candidates;
  std::vector<std::size_t> q;
  std::vector<char> used(a[k].cols, 0);
  column_matches(a[k], b[k], row_perm, tol, q, used, candidates, 100000);
  for (auto &cand : candidates) {
    bond_perms.push_back(cand);
    if (chain_search(a, b, k + 1, cand, tol, bond_perms)) return true;
    bond_perms.pop_back();
  }
  return false;
}

}  // namespace detail

/// Searches bond relabellings making two chains of operator matrices equal.
///
/// Returns one permutation per internal bond (p[i] = index in `a` of row or
/// column i of `b`), consistent between neighbouring sites, or nullopt.
inline std::optional<std::vector<std::vector<std::size_t>>> match_up_to_bond_permutation(
    const std::vector<OperatorMatrix> &a, const std::vector<OperatorMatrix> &b, double tol = 1e-12) {
  if (a.size() != b.size()) return std::nullopt;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].rows != b[k].rows || a[k].cols != b[k].cols || a[k].dim != b[k].dim) return std::nullopt;
  if (a.empty()) return std::vector<std::vector<std::size_t>>{};
  std::vector<std::vector<std::size_t>> perms;
  const std::vector<std::size_t> first_rows(a.front().rows, 0);
  if (a.front().rows != 1) return std::nullopt;
  if (!detail::chain_search(a, b, 0, first_rows, tol, perms)) return std::nullopt;
  perms.pop_back();  // trailing trivial bond
  return perms;
}

}  // namespace ttno::oqs

#endif  // TTNO_OQS_HPP
