// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_SVD_REFERENCE_HPP
#define TTNO_SVD_REFERENCE_HPP

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ttno/common.hpp"
#include "ttno/hamiltonian.hpp"
#include "ttno/state_diagram.hpp"
#include "ttno/tree.hpp"

namespace ttno {

inline constexpr double kRankTolerance = 1e-10;

/// Reshape H across a cut: rows carry the (out, in) pairs of the sites with
/// `side[node index]` set, columns those of the remaining sites.
inline DenseMatrix matricize(const DenseMatrix &h, const TreeTopology &t, const std::vector<SiteId> &ordering,
                             const std::vector<char> &side) {
  const std::size_t n = ordering.size();
  std::vector<std::size_t> d(n), row_stride(n, 0), col_stride(n, 0);
  std::size_t rows = 1, cols = 1;
  for (std::size_t k = n; k-- > 0;) {
    d[k] = static_cast<std::size_t>(t.phys_dim(ordering[k]));
    if (side[t.index_of(ordering[k])]) {
      row_stride[k] = rows;
      rows *= d[k] * d[k];
    } else {
      col_stride[k] = cols;
      cols *= d[k] * d[k];
    }
  }
  const std::size_t dim = static_cast<std::size_t>(h.rows());
  // H(i, j) lands at (r_out[i] + r_in[j], c_out[i] + c_in[j]).
  std::vector<std::size_t> r_out(dim, 0), r_in(dim, 0), c_out(dim, 0), c_in(dim, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t rest = i;
    for (std::size_t k = n; k-- > 0;) {
      const std::size_t digit = rest % d[k];
      rest /= d[k];
      r_out[i] += digit * d[k] * row_stride[k];
      r_in[i] += digit * row_stride[k];
      c_out[i] += digit * d[k] * col_stride[k];
      c_in[i] += digit * col_stride[k];
    }
  }
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      m(static_cast<Eigen::Index>(r_out[i] + r_in[j]), static_cast<Eigen::Index>(c_out[i] + c_in[j])) =
          h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return m;
}

/// Number of singular values above rel_tol * sigma_max (0 for a zero matrix).
///
/// A column-pivoted QR first drops the exactly-null directions, then
/// JacobiSVD runs on the compressed block. BDCSVD is avoided on purpose: it
/// returns spurious singular values on the highly degenerate spectra that
/// Pauli sums produce.
inline std::size_t numerical_rank(const DenseMatrix &m, double rel_tol = kRankTolerance) {
  if (m.size() == 0) return 0;
  const DenseMatrix a = m.rows() <= m.cols() ? DenseMatrix(m.adjoint()) : m;
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(a);
  qr.setThreshold(1e-14);
  const Eigen::Index k = qr.rank();
  if (k == 0) return 0;
  // R's leading k rows carry every non-negligible singular value of a.
  const DenseMatrix r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  const Eigen::VectorXd s = Eigen::JacobiSVD<DenseMatrix>(r).singularValues();
  if (s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  std::size_t n = 0;
  for (Eigen::Index j = 0; j < s.size(); ++j) n += s(j) > cut;
  return n;
}

/// Operator Schmidt rank across every tree edge: the minimal TTNO bond
/// dimension of H on that edge.
inline std::map<Edge, std::size_t> optimal_bond_dims(const Hamiltonian &h, double rel_tol = kRankTolerance,
                                                     std::size_t cap = dense_cap()) {
  const auto &t = h.tree();
  const auto order = t.preorder();
  const DenseMatrix dense = to_dense(h, order, cap);
  std::map<Edge, std::size_t> out;
  for (std::size_t e = 0; e < t.num_edges(); ++e) {
    auto side = edge_side_mask(t, e, t.lower_end(e));
    out[t.edges()[e]] = numerical_rank(matricize(dense, t, order, side), rel_tol);
  }
  return out;
}

/// Per-edge algorithmic vs optimal bond dimensions.
struct BondReport {
  std::vector<Edge> edges;
  std::vector<std::size_t> alg_dim;
  std::vector<std::size_t> opt_dim;

  std::size_t excess() const {
    std::size_t s = 0;
    for (std::size_t k = 0; k < edges.size(); ++k) s += alg_dim[k] - opt_dim[k];
    return s;
  }

  void validate() const {
    if (alg_dim.size() != edges.size() || opt_dim.size() != edges.size())
      throw ConsistencyError("bond report columns have different lengths");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (alg_dim[k] < 1 || opt_dim[k] < 1) throw ConsistencyError("bond dimensions must be positive");
      if (opt_dim[k] > alg_dim[k])
        throw ConsistencyError("optimal bond dimension exceeds the constructed one on edge " + edges[k].to_string());
    }
  }
};

inline BondReport bond_report(const std::map<Edge, std::size_t> &alg, const std::map<Edge, std::size_t> &opt) {
  BondReport r;
  for (auto &[e, a] : alg) {
    auto it = opt.find(e);
    if (it == opt.end()) throw InputError("edge sets of the two bond maps differ");
    r.edges.push_back(e);
    r.alg_dim.push_back(a);
    r.opt_dim.push_back(it->second);
  }
  if (opt.size() != alg.size()) throw InputError("edge sets of the two bond maps differ");
  return r;
}

/// One random sample of the benchmark.
struct BenchRecord {
  std::uint64_t seed = 0;
  std::size_t n_terms = 0;
  BondReport bonds;
  /// Hyperedge examinations while building the diagram.
  std::size_t work = 0;
};

/// Deterministic per-sample seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n_terms, std::uint64_t sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(n_terms), static_cast<std::uint32_t>(sample),
                    static_cast<std::uint32_t>(sample >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct BenchConfig {
  std::vector<std::string> labels{"X", "Y", "Z"};
  /// Largest support of a random term; 0 means the whole tree.
  std::size_t max_support = 0;
  BuildOptions build{};
};

/// Builds one random Hamiltonian and compares its diagram with the oracle.
inline BenchRecord bench_sample(const TreeTopology &tree, std::size_t n_terms, std::uint64_t seed,
                                const BenchConfig &cfg = {}) {
  const std::size_t support = cfg.max_support == 0 ? tree.size() : cfg.max_support;
  Hamiltonian h = random_hamiltonian(tree, n_terms, cfg.labels, support, seed);
  StateDiagram d = from_hamiltonian(h, cfg.build);
  BenchRecord rec;
  rec.seed = seed;
  rec.n_terms = n_terms;
  rec.bonds = bond_report(d.bond_dimensions(), optimal_bond_dims(h));
  rec.work = d.work();
  return rec;
}

/// Sum of (alg - opt) over all samples and bonds, divided by
/// N_samples * N_bonds.
inline double r_diff(const std::vector<BenchRecord> &records) {
  if (records.empty()) throw InputError("r_diff needs at least one record");
  const auto &edges = records.front().bonds.edges;
  if (edges.empty()) throw InputError("r_diff needs at least one bond");
  double total = 0;
  for (auto &r : records) {
    if (r.bonds.edges != edges) throw InputError("records have inconsistent edge sets");
    r.bonds.validate();
    total += static_cast<double>(r.bonds.excess());
  }
  return total / (static_cast<double>(records.size()) * static_cast<double>(edges.size()));
}

/// Standard error of r_diff, treating per-sample mean excess as i.i.d.
inline double r_diff_standard_error(const std::vector<BenchRecord> &records) {
  if (records.size() < 2) return 0.0;
  const double mean = r_diff(records);
  const double nb = static_cast<double>(records.front().bonds.edges.size());
  double ss = 0;
  for (auto &r : records) {
    const double x = static_cast<double>(r.bonds.excess()) / nb - mean;
    ss += x * x;
  }
  const double n = static_cast<double>(records.size());
  return std::sqrt(ss / (n - 1)) / std::sqrt(n);
}

}  // namespace ttno

#endif  // TTNO_SVD_REFERENCE_HPP
