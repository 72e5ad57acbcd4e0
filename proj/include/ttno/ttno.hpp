// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_TTNO_HPP
#define TTNO_TTNO_HPP

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ttno/common.hpp"
#include "ttno/hamiltonian.hpp"
#include "ttno/state_diagram.hpp"
#include "ttno/tree.hpp"

namespace ttno {

struct Leg {
  Edge edge;
  std::size_t dim = 1;
  friend bool operator==(const Leg &, const Leg &) = default;
};

/// Dense site tensor of shape (bond legs..., d_out, d_in), row-major.
class TTNOTensor {
 public:
  TTNOTensor() = default;
  TTNOTensor(SiteId site, std::vector<Leg> legs, int phys_dim)
      : site_(site), legs_(std::move(legs)), phys_dim_(phys_dim) {
    std::size_t n = static_cast<std::size_t>(phys_dim) * static_cast<std::size_t>(phys_dim);
    for (auto &l : legs_) n *= l.dim;
    data_.assign(n, Complex(0.0, 0.0));
  }

  SiteId site() const { return site_; }
  const std::vector<Leg> &legs() const { return legs_; }
  int phys_dim() const { return phys_dim_; }
  std::vector<Complex> &data() { return data_; }
  const std::vector<Complex> &data() const { return data_; }

  /// Number of bond multi-indices (one d x d slice each).
  std::size_t num_slices() const {
    std::size_t n = 1;
    for (auto &l : legs_) n *= l.dim;
    return n;
  }

  std::size_t slice_offset(const std::vector<std::size_t> &bond_index) const {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < legs_.size(); ++k) flat = flat * legs_[k].dim + bond_index[k];
    return flat * static_cast<std::size_t>(phys_dim_ * phys_dim_);
  }

  std::vector<std::size_t> unflatten(std::size_t slice) const {
    std::vector<std::size_t> idx(legs_.size());
    for (std::size_t k = legs_.size(); k-- > 0;) {
      idx[k] = slice % legs_[k].dim;
      slice /= legs_[k].dim;
    }
    return idx;
  }

  DenseMatrix slice(const std::vector<std::size_t> &bond_index) const { return slice_at(slice_offset(bond_index)); }

  DenseMatrix slice_at(std::size_t offset) const {
    DenseMatrix m(phys_dim_, phys_dim_);
    for (int r = 0; r < phys_dim_; ++r)
      for (int c = 0; c < phys_dim_; ++c) m(r, c) = data_[offset + static_cast<std::size_t>(r * phys_dim_ + c)];
    return m;
  }

  void add_to_slice(const std::vector<std::size_t> &bond_index, const DenseMatrix &m) {
    std::size_t off = slice_offset(bond_index);
    for (int r = 0; r < phys_dim_; ++r)
      for (int c = 0; c < phys_dim_; ++c) data_[off + static_cast<std::size_t>(r * phys_dim_ + c)] += m(r, c);
  }
  void set_slice(const std::vector<std::size_t> &bond_index, const DenseMatrix &m) {
    std::size_t off = slice_offset(bond_index);
    for (int r = 0; r < phys_dim_; ++r)
      for (int c = 0; c < phys_dim_; ++c) data_[off + static_cast<std::size_t>(r * phys_dim_ + c)] = m(r, c);
  }

  bool slice_is_zero(std::size_t slice) const {
    const std::size_t dd = static_cast<std::size_t>(phys_dim_ * phys_dim_);
    for (std::size_t k = 0; k < dd; ++k)
      if (data_[slice * dd + k] != Complex(0.0, 0.0)) return false;
    return true;
  }

  std::size_t nonzero_slices() const {
    std::size_t n = 0;
    for (std::size_t s = 0; s < num_slices(); ++s) n += !slice_is_zero(s);
    return n;
  }

  friend bool operator==(const TTNOTensor &, const TTNOTensor &) = default;

 private:
  SiteId site_;
  std::vector<Leg> legs_;
  int phys_dim_ = 1;
  std::vector<Complex> data_;
};

/// Canonical leg order at a site: parent edge first, children ascending.
inline std::vector<std::size_t> leg_neighbours(const TreeTopology &t, std::size_t i) {
  std::vector<std::size_t> out;
  if (t.parent_index(i) != TreeTopology::npos) out.push_back(t.parent_index(i));
  for (std::size_t c : t.children_indices(i)) out.push_back(c);
  return out;
}

/// Tree tensor network operator: one tensor per site.
class TTNO {
 public:
  TTNO() = default;
  TTNO(TreeTopology tree, std::map<SiteId, TTNOTensor> tensors) : tree_(std::move(tree)), tensors_(std::move(tensors)) {
    validate();
  }

  const TreeTopology &tree() const { return tree_; }
  const std::map<SiteId, TTNOTensor> &tensors() const { return tensors_; }
  std::map<SiteId, TTNOTensor> &tensors() { return tensors_; }
  const TTNOTensor &at(SiteId s) const {
    auto it = tensors_.find(s);
    if (it == tensors_.end()) throw InputError("no tensor for site " + std::to_string(s.value));
    return it->second;
  }

  /// Bond dimension per edge, read off the tensors.
  std::map<Edge, std::size_t> bond_dimensions() const {
    std::map<Edge, std::size_t> out;
    for (auto &[s, t] : tensors_)
      for (auto &l : t.legs()) out[l.edge] = l.dim;
    return out;
  }

  /// Checks leg order, physical dims and shared bond dimensions.
  void validate() const {
    if (tensors_.size() != tree_.size()) throw ConsistencyError("TTNO must hold one tensor per site");
    std::map<Edge, std::size_t> dims;
    for (std::size_t i = 0; i < tree_.size(); ++i) {
      SiteId s = tree_.site(i);
      auto it = tensors_.find(s);
      if (it == tensors_.end()) throw ConsistencyError("TTNO is missing the tensor of site " + std::to_string(s.value));
      const auto &ten = it->second;
      if (ten.site() != s) throw ConsistencyError("tensor stored under the wrong site");
      if (ten.phys_dim() != tree_.phys_dim_at(i)) throw ConsistencyError("tensor physical dimension mismatch");
      auto nb = leg_neighbours(tree_, i);
      if (nb.size() != ten.legs().size()) throw ConsistencyError("tensor leg count differs from site degree");
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const Leg &l = ten.legs()[k];
        if (l.edge != Edge(s, tree_.site(nb[k]))) throw ConsistencyError("tensor legs are not in canonical order");
        if (l.dim < 1) throw ConsistencyError("bond dimension must be positive");
        auto [pos, fresh] = dims.emplace(l.edge, l.dim);
        if (!fresh && pos->second != l.dim) throw ConsistencyError("shared edge has different dimensions at its ends");
      }
    }
  }

 private:
  TreeTopology tree_;
  std::map<SiteId, TTNOTensor> tensors_;
};

/// Bijection vertex -> {0..|w_e|-1} per edge.
struct IndexAssignment {
  /// Indexed by global vertex id.
  std::vector<std::size_t> index;
  /// |w_e| per edge index.
  std::vector<std::size_t> edge_dims;

  friend bool operator==(const IndexAssignment &, const IndexAssignment &) = default;
};

/// Vertices are numbered by insertion order within each w_e.
inline IndexAssignment assign_indices(const StateDiagram &d) {
  IndexAssignment a;
  a.index.assign(d.vertices().size(), 0);
  for (std::size_t e = 0; e < d.tree().num_edges(); ++e) {
    const auto &w = d.edge_vertices(e);
    for (std::size_t k = 0; k < w.size(); ++k) a.index[w[k]] = k;
    a.edge_dims.push_back(w.size());
  }
  return a;
}

/// Reads the TTNO tensors off a state diagram.
///
/// Each hyperedge writes its label's matrix at the multi-index of its
/// vertices. Hyperedges with different labels on the same vertices add up;
/// identical label and vertices are rejected as an inconsistent diagram.
inline TTNO emit_tensors(const StateDiagram &d, const IndexAssignment &a, const OperatorRegistry &reg) {
  const auto &t = d.tree();
  std::map<SiteId, TTNOTensor> tensors;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const SiteId s = t.site(i);
    auto legs_nb = leg_neighbours(t, i);
    std::vector<Leg> legs;
    for (std::size_t nb : legs_nb) {
      std::size_t e = t.edge_index(s, t.site(nb));
      legs.push_back(Leg{t.edges()[e], a.edge_dims.at(e)});
    }
    TTNOTensor ten(s, legs, t.phys_dim_at(i));
    // slot[k] = position in the hyperedge vertex list of leg k.
    const auto &nbs = t.neighbour_indices(i);
    std::vector<std::size_t> slot;
    for (std::size_t nb : legs_nb)
      slot.push_back(static_cast<std::size_t>(std::find(nbs.begin(), nbs.end(), nb) - nbs.begin()));
    std::set<std::pair<std::string, std::vector<std::size_t>>> written;
    for (std::size_t y : d.site_hyperedges(i)) {
      const HyperEdge &h = d.hyperedges()[y];
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < slot.size(); ++k) idx.push_back(a.index.at(h.vertices[slot[k]]));
      if (!written.insert({h.label.label(), idx}).second)
        throw ConsistencyError("two hyperedges with the same label map to one tensor element at site " +
                               std::to_string(s.value));
      ten.add_to_slice(idx, reg.resolve(h.label));
    }
    tensors.emplace(s, std::move(ten));
  }
  return TTNO(t, std::move(tensors));
}

inline TTNO emit_tensors(const StateDiagram &d, const OperatorRegistry &reg) {
  return emit_tensors(d, assign_indices(d), reg);
}

/// Full algorithmic pipeline: Hamiltonian -> state diagram -> TTNO.
inline TTNO build_ttno(const Hamiltonian &h, BuildOptions opts = {}) {
  return emit_tensors(from_hamiltonian(h, opts), h.registry());
}

/// Basis permutation between two site orderings of the same Kronecker space.
///
/// Returns p with p[i_to] = i_from.
inline std::vector<std::size_t> basis_permutation(const TreeTopology &t, const std::vector<SiteId> &from,
                                                  const std::vector<SiteId> &to) {
  const std::size_t n = from.size();
  std::vector<std::size_t> pos_in_from(n);
  std::map<SiteId, std::size_t> where;
  for (std::size_t k = 0; k < n; ++k) where[from[k]] = k;
  for (std::size_t k = 0; k < n; ++k) pos_in_from[k] = where.at(to[k]);
  std::vector<std::size_t> dims_from(n), stride_from(n);
  for (std::size_t k = 0; k < n; ++k) dims_from[k] = static_cast<std::size_t>(t.phys_dim(from[k]));
  std::size_t total = 1;
  for (std::size_t k = n; k-- > 0;) {
    stride_from[k] = total;
    total *= dims_from[k];
  }
  std::vector<std::size_t> p(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t src = 0;
    for (std::size_t k = 0; k < n; ++k) src += digit[k] * stride_from[pos_in_from[k]];
    p[i] = src;
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < dims_from[pos_in_from[k]]) break;
      digit[k] = 0;
    }
  }
  return p;
}

inline DenseMatrix permute_basis(const DenseMatrix &m, const std::vector<std::size_t> &p) {
  const Eigen::Index n = static_cast<Eigen::Index>(p.size());
  DenseMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = m(static_cast<Eigen::Index>(p[static_cast<std::size_t>(i)]), static_cast<Eigen::Index>(p[static_cast<std::size_t>(j)]));
  return out;
}

/// Contracts every bond leg; output indexed in `ordering` like to_dense.
inline DenseMatrix contract_to_dense(const TTNO &ttno, const std::vector<SiteId> &ordering,
                                     std::size_t cap = dense_cap()) {
  const auto &t = ttno.tree();
  checked_hilbert_dim(t, ordering, cap);
  // For each site: operators on its subtree (pre-order), one per parent bond value.
  std::vector<std::vector<DenseMatrix>> sub(t.size());
  std::vector<std::vector<SiteId>> sub_order(t.size());
  const auto &bfs = t.bfs_order();
  for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
    const std::size_t i = *it;
    const TTNOTensor &ten = ttno.at(t.site(i));
    const auto nb = leg_neighbours(t, i);
    const bool has_parent = t.parent_index(i) != TreeTopology::npos;
    const std::size_t first_child = has_parent ? 1 : 0;
    const std::size_t parent_dim = has_parent ? ten.legs()[0].dim : 1;
    std::size_t sub_dim = static_cast<std::size_t>(ten.phys_dim());
    sub_order[i] = {t.site(i)};
    for (std::size_t k = first_child; k < nb.size(); ++k) {
      sub_dim *= static_cast<std::size_t>(sub[nb[k]].front().rows());
      sub_order[i].insert(sub_order[i].end(), sub_order[nb[k]].begin(), sub_order[nb[k]].end());
    }
    std::vector<DenseMatrix> acc(parent_dim, DenseMatrix::Zero(static_cast<Eigen::Index>(sub_dim), static_cast<Eigen::Index>(sub_dim)));
    for (std::size_t sl = 0; sl < ten.num_slices(); ++sl) {
      if (ten.slice_is_zero(sl)) continue;
      auto idx = ten.unflatten(sl);
      DenseMatrix m = ten.slice_at(sl * static_cast<std::size_t>(ten.phys_dim() * ten.phys_dim()));
      for (std::size_t k = first_child; k < nb.size(); ++k) m = kron(m, sub[nb[k]][idx[k]]);
      acc[has_parent ? idx[0] : 0] += m;
    }
    sub[i] = std::move(acc);
    for (std::size_t k = first_child; k < nb.size(); ++k) {
      sub[nb[k]].clear();
      sub[nb[k]].shrink_to_fit();
    }
  }
  const std::size_t r = t.root_index();
  return permute_basis(sub[r][0], basis_permutation(t, sub_order[r], ordering));
}

inline DenseMatrix contract_to_dense(const TTNO &ttno) { return contract_to_dense(ttno, ttno.tree().preorder()); }

/// Sum over sites of (product of bond dims) * d^2, from the tensor shapes.
inline std::size_t element_count(const TTNO &ttno) {
  std::size_t n = 0;
  for (auto &[s, ten] : ttno.tensors()) n += ten.num_slices() * static_cast<std::size_t>(ten.phys_dim() * ten.phys_dim());
  return n;
}

/// Number of complex entries actually allocated.
inline std::size_t dense_element_count(const TTNO &ttno) {
  std::size_t n = 0;
  for (auto &[s, ten] : ttno.tensors()) n += ten.data().size();
  return n;
}

/// Number of non-zero d x d slices over all sites.
inline std::size_t nonzero_slice_count(const TTNO &ttno) {
  std::size_t n = 0;
  for (auto &[s, ten] : ttno.tensors()) n += ten.nonzero_slices();
  return n;
}

// ---------------------------------------------------------------------------
// Text dump. Doubles use the shortest round-trip representation, so
// write -> read reproduces every element bit for bit.
//
//   ttno 1
//   root <id>
//   sites <n>
//   <id> <d>            (n lines)
//   edges <m>
//   <a> <b>             (m lines)
//   tensor <id> <d> <k> <a1> <b1> <dim1> ... <ak> <bk> <dimk>
//   <re> <im>           (one line per element, row-major)
// ---------------------------------------------------------------------------

inline void write_ttno(std::ostream &os, const TTNO &ttno) {
  const auto &t = ttno.tree();
  os << "ttno 1\nroot " << t.root() << "\nsites " << t.size() << "\n";
  for (SiteId s : t.nodes()) os << s << " " << t.phys_dim(s) << "\n";
  os << "edges " << t.num_edges() << "\n";
  for (auto &e : t.edges()) os << e.a << " " << e.b << "\n";
  for (auto &[s, ten] : ttno.tensors()) {
    os << "tensor " << s << " " << ten.phys_dim() << " " << ten.legs().size();
    for (auto &l : ten.legs()) os << " " << l.edge.a << " " << l.edge.b << " " << l.dim;
    os << "\n";
    for (const Complex &z : ten.data()) os << format_double(z.real()) << " " << format_double(z.imag()) << "\n";
  }
}

namespace detail {

inline double parse_double(const std::string &tok) {
  double v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError("malformed number '" + tok + "'");
  return v;
}

template <class T>
T expect(std::istream &is, const char *what) {
  T v;
  if (!(is >> v)) throw ParseError(std::string("TTNO dump: expected ") + what);
  return v;
}

inline void expect_word(std::istream &is, const std::string &w) {
  std::string got;
  if (!(is >> got) || got != w) throw ParseError("TTNO dump: expected '" + w + "', got '" + got + "'");
}

}  // namespace detail

inline TTNO read_ttno(std::istream &is) {
  using detail::expect;
  detail::expect_word(is, "ttno");
  if (expect<int>(is, "format version") != 1) throw ParseError("TTNO dump: unsupported version");
  detail::expect_word(is, "root");
  SiteId root(expect<std::uint32_t>(is, "root id"));
  detail::expect_word(is, "sites");
  const auto n = expect<std::size_t>(is, "site count");
  std::vector<SiteId> nodes;
  std::map<SiteId, int> dims;
  for (std::size_t k = 0; k < n; ++k) {
    SiteId s(expect<std::uint32_t>(is, "site id"));
    nodes.push_back(s);
    dims[s] = expect<int>(is, "physical dimension");
  }
  detail::expect_word(is, "edges");
  const auto m = expect<std::size_t>(is, "edge count");
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < m; ++k) {
    SiteId a(expect<std::uint32_t>(is, "edge endpoint"));
    SiteId b(expect<std::uint32_t>(is, "edge endpoint"));
    edges.emplace_back(a, b);
  }
  TreeTopology tree(nodes, edges, root, dims);
  std::map<SiteId, TTNOTensor> tensors;
  for (std::size_t k = 0; k < n; ++k) {
    detail::expect_word(is, "tensor");
    SiteId s(expect<std::uint32_t>(is, "tensor site"));
    int d = expect<int>(is, "tensor physical dimension");
    auto nlegs = expect<std::size_t>(is, "leg count");
    std::vector<Leg> legs;
    for (std::size_t l = 0; l < nlegs; ++l) {
      SiteId a(expect<std::uint32_t>(is, "leg endpoint"));
      SiteId b(expect<std::uint32_t>(is, "leg endpoint"));
      legs.push_back(Leg{Edge(a, b), expect<std::size_t>(is, "leg dimension")});
    }
    TTNOTensor ten(s, legs, d);
    for (auto &z : ten.data()) {
      double re = detail::parse_double(expect<std::string>(is, "real part"));
      double im = detail::parse_double(expect<std::string>(is, "imaginary part"));
      z = Complex(re, im);
    }
    if (!tensors.emplace(s, std::move(ten)).second) throw ParseError("TTNO dump: duplicate tensor");
  }
  return TTNO(std::move(tree), std::move(tensors));
}

inline void save_ttno(const std::string &path, const TTNO &ttno) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  write_ttno(os, ttno);
}

inline TTNO load_ttno(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open '" + path + "'");
  return read_ttno(is);
}

/// Max absolute element-wise deviation between the contraction and to_dense.
inline double dense_deviation(const TTNO &ttno, const Hamiltonian &h, std::size_t cap = dense_cap()) {
  auto order = h.tree().preorder();
  DenseMatrix a = contract_to_dense(ttno, order, cap);
  DenseMatrix b = to_dense(h, order, cap);
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace ttno

#endif  // TTNO_TTNO_HPP
