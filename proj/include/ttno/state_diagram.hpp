// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_STATE_DIAGRAM_HPP
#define TTNO_STATE_DIAGRAM_HPP

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ttno/common.hpp"
#include "ttno/hamiltonian.hpp"
#include "ttno/tree.hpp"

namespace ttno {

/// Bond index value living on one tree edge.
struct Vertex {
  std::size_t id = 0;             // global insertion index
  std::size_t edge = 0;           // owning tree edge (index into tree.edges())
  std::size_t index_in_edge = 0;  // position inside w_e
  // Hyperedges attached at the edge's `a` and `b` endpoint respectively.
  std::vector<std::size_t> at_a;
  std::vector<std::size_t> at_b;
};

/// Labelled hyperedge of one site: one connected vertex per incident edge.
struct HyperEdge {
  std::size_t id = 0;
  std::size_t site = 0;  // node index
  SiteOperator label;
  /// Aligned with tree.incident_edges(site), i.e. neighbours ascending.
  std::vector<std::size_t> vertices;
};

struct AddTermOptions {
  /// When false, no existing structure is reused (naive union of paths).
  bool reuse = true;
};

/// Directed labelled hypergraph whose vertex collections w_e sit on tree
/// edges and whose hyperedge collections eps_s sit on tree sites.
///
/// The implicit initial and final vertices (trivial legs at the root and
/// the leaves) are never stored. Each single path (one hyperedge per site,
/// consistent on shared vertices) encodes one product term.
class StateDiagram {
 public:
  StateDiagram() = default;
  explicit StateDiagram(TreeTopology tree)
      : tree_(std::move(tree)), edge_vertices_(tree_.num_edges()), site_hyperedges_(tree_.size()) {}

  /// Diagram of a single term: one vertex per edge, one hyperedge per site.
  static StateDiagram single_term(const TreeTopology &tree, const ProductTerm &term) {
    StateDiagram d(tree);
    d.add_term(term, AddTermOptions{.reuse = false});
    return d;
  }

  /// Adds exactly one new single path reproducing `term`.
  ///
  /// Existing structure is reused by walking inward from every leaf: a
  /// hyperedge is followed when its label matches the term, all but one of
  /// its vertices are already marked, and the remaining vertex has no other
  /// hyperedge on this site. Sites and edges left unmatched receive fresh
  /// vertices and hyperedges. Throws DuplicateTermError if the term is
  /// already represented.
  void add_term(const ProductTerm &raw_term, AddTermOptions opts = {}) {
    const ProductTerm term = fold_coefficient(raw_term, tree_.root(), tree_.phys_dim(tree_.root()));
    for (auto &[s, op] : term.factors) {
      if (!tree_.contains(s)) throw ValidationError("term acts on a site outside the tree");
      if (op.is_identity()) throw ValidationError("term carries an explicit identity factor");
      if (op.dim() != tree_.phys_dim(s)) throw ValidationError("factor dimension does not match site");
    }
    if (!term_keys_.insert(term.key()).second)
      throw DuplicateTermError("term is already represented in the state diagram");
    terms_.push_back(term);

    const std::size_t n = tree_.size();
    std::vector<SiteOperator> wanted;
    wanted.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      wanted.push_back(term.factor_or_identity(tree_.site(i), tree_.phys_dim_at(i)));

    marked_.assign(tree_.num_edges(), kNone);
    if (opts.reuse) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i == tree_.root_index() && n > 1) continue;
        if (!tree_.children_indices(i).empty()) continue;
        mark_matching(site_hyperedges_[i], i, wanted);
      }
    }

    // Complete the path in ascending site order.
    for (std::size_t i = 0; i < n; ++i) {
      const auto &inc = tree_.incident_edges(i);
      std::vector<std::size_t> verts;
      verts.reserve(inc.size());
      for (std::size_t e : inc) {
        if (marked_[e] == kNone) marked_[e] = new_vertex(e);
        verts.push_back(marked_[e]);
      }
      const auto &candidates = inc.empty() ? site_hyperedges_[i] : attached(verts[0], i);
      bool exists = false;
      for (std::size_t y : candidates) {
        ++work_;
        if (hyperedges_[y].vertices == verts && hyperedges_[y].label == wanted[i]) {
          exists = true;
          break;
        }
      }
      if (!exists) new_hyperedge(i, wanted[i], std::move(verts));
    }
  }

  const TreeTopology &tree() const { return tree_; }
  const std::vector<Vertex> &vertices() const { return vertices_; }
  const std::vector<HyperEdge> &hyperedges() const { return hyperedges_; }
  /// w_e for edge index e, in insertion order.
  const std::vector<std::size_t> &edge_vertices(std::size_t e) const { return edge_vertices_[e]; }
  /// eps_s for node index i, in insertion order.
  const std::vector<std::size_t> &site_hyperedges(std::size_t i) const { return site_hyperedges_[i]; }
  /// Folded terms in insertion order.
  const std::vector<ProductTerm> &terms() const { return terms_; }

  /// Hyperedge visits performed by all add_term calls so far.
  std::size_t work() const { return work_; }

  /// Hyperedges attached to vertex v on the side of site i.
  const std::vector<std::size_t> &attached(std::size_t v, std::size_t site) const {
    const Vertex &vx = vertices_[v];
    return tree_.index_of(tree_.edges()[vx.edge].a) == site ? vx.at_a : vx.at_b;
  }

  /// |w_e| per edge, indexed like tree().edges().
  std::vector<std::size_t> bond_dimension_list() const {
    std::vector<std::size_t> out;
    for (auto &w : edge_vertices_) out.push_back(w.size());
    return out;
  }

  std::map<Edge, std::size_t> bond_dimensions() const {
    std::map<Edge, std::size_t> out;
    for (std::size_t e = 0; e < tree_.num_edges(); ++e) out[tree_.edges()[e]] = edge_vertices_[e].size();
    return out;
  }

  std::size_t max_bond_dimension() const {
    std::size_t m = 0;
    for (auto &w : edge_vertices_) m = std::max(m, w.size());
    return m;
  }

  /// Number of single paths, without materialising them.
  std::size_t count_single_paths() const {
    // Bottom-up: paths below a vertex on its lower side.
    const std::size_t n = tree_.size();
    if (n == 0) return 0;
    std::vector<std::size_t> below(vertices_.size(), 0);
    auto order = tree_.bfs_order();
    std::vector<std::size_t> at_hyper(hyperedges_.size(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      std::size_t i = *it;
      for (std::size_t y : site_hyperedges_[i]) {
        std::size_t prod = 1;
        const auto &inc = tree_.incident_edges(i);
        for (std::size_t k = 0; k < inc.size(); ++k) {
          if (tree_.lower_end(inc[k]) == i) continue;  // parent edge
          prod *= below[hyperedges_[y].vertices[k]];
        }
        at_hyper[y] = prod;
        if (i != tree_.root_index()) {
          std::size_t pk = parent_slot(i);
          below[hyperedges_[y].vertices[pk]] += prod;
        }
      }
    }
    std::size_t total = 0;
    for (std::size_t y : site_hyperedges_[tree_.root_index()]) total += at_hyper[y];
    return total;
  }

  /// Every single path as a folded product term (identity labels dropped).
  std::vector<ProductTerm> enumerate_single_paths(std::size_t cap = 1'000'000) const {
    if (count_single_paths() > cap)
      throw CapExceededError("state diagram has more than " + std::to_string(cap) + " single paths");
    std::vector<ProductTerm> out;
    const auto &order = tree_.bfs_order();
    std::vector<std::size_t> chosen(tree_.size(), kNone);
    enumerate_rec(order, 0, chosen, out);
    return out;
  }

  /// Checks the structural invariants; throws ConsistencyError.
  void validate() const {
    std::vector<int> owner(vertices_.size(), 0);
    for (std::size_t e = 0; e < edge_vertices_.size(); ++e)
      for (std::size_t v : edge_vertices_[e]) {
        if (vertices_[v].edge != e) throw ConsistencyError("vertex listed under a foreign edge");
        ++owner[v];
      }
    for (int c : owner)
      if (c != 1) throw ConsistencyError("vertex collections do not form a disjoint covering");
    std::vector<int> hy_owner(hyperedges_.size(), 0);
    for (std::size_t i = 0; i < site_hyperedges_.size(); ++i) {
      std::set<std::pair<std::string, std::vector<std::size_t>>> seen;
      for (std::size_t y : site_hyperedges_[i]) {
        const HyperEdge &h = hyperedges_[y];
        ++hy_owner[y];
        if (h.site != i) throw ConsistencyError("hyperedge listed under a foreign site");
        const auto &inc = tree_.incident_edges(i);
        if (h.vertices.size() != inc.size()) throw ConsistencyError("hyperedge arity differs from site degree");
        for (std::size_t k = 0; k < inc.size(); ++k)
          if (vertices_[h.vertices[k]].edge != inc[k]) throw ConsistencyError("hyperedge connects a vertex of the wrong edge");
        if (!seen.insert({h.label.label() + "/" + std::to_string(h.label.dim()), h.vertices}).second)
          throw ConsistencyError("two hyperedges with identical label and vertices (mergeable)");
      }
    }
    for (int c : hy_owner)
      if (c != 1) throw ConsistencyError("hyperedge collections do not form a disjoint covering");
    for (auto &v : vertices_)
      if (v.at_a.empty() || v.at_b.empty())
        throw ConsistencyError("vertex is not connected on both sides of its edge");
  }

  /// Line-oriented, deterministic text form.
  std::string dump() const {
    std::ostringstream os;
    os << "state_diagram " << tree_.to_string() << "\n";
    for (std::size_t e = 0; e < tree_.num_edges(); ++e) {
      os << "edge " << tree_.edges()[e] << " vertices " << edge_vertices_[e].size() << ":";
      for (std::size_t v : edge_vertices_[e]) os << " v" << v;
      os << "\n";
    }
    for (std::size_t i = 0; i < tree_.size(); ++i) {
      os << "site " << tree_.site(i) << " hyperedges " << site_hyperedges_[i].size() << "\n";
      for (std::size_t y : site_hyperedges_[i]) {
        const HyperEdge &h = hyperedges_[y];
        os << "  y" << y << " " << h.label.label() << " [";
        for (std::size_t k = 0; k < h.vertices.size(); ++k) os << (k ? " " : "") << "v" << h.vertices[k];
        os << "]\n";
      }
    }
    return os.str();
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t parent_slot(std::size_t i) const {
    const auto &nb = tree_.neighbour_indices(i);
    return static_cast<std::size_t>(std::find(nb.begin(), nb.end(), tree_.parent_index(i)) - nb.begin());
  }

  std::size_t new_vertex(std::size_t e) {
    Vertex v;
    v.id = vertices_.size();
    v.edge = e;
    v.index_in_edge = edge_vertices_[e].size();
    edge_vertices_[e].push_back(v.id);
    vertices_.push_back(std::move(v));
    return vertices_.back().id;
  }

  void new_hyperedge(std::size_t site, SiteOperator label, std::vector<std::size_t> verts) {
    HyperEdge h;
    h.id = hyperedges_.size();
    h.site = site;
    h.label = std::move(label);
    h.vertices = std::move(verts);
    for (std::size_t v : h.vertices) {
      Vertex &vx = vertices_[v];
      (tree_.index_of(tree_.edges()[vx.edge].a) == site ? vx.at_a : vx.at_b).push_back(h.id);
    }
    site_hyperedges_[site].push_back(h.id);
    hyperedges_.push_back(std::move(h));
  }

  // Follows matching hyperedges from `site` inward, marking one vertex per
  // step. The first admissible candidate wins.
  void mark_matching(const std::vector<std::size_t> &start, std::size_t site,
                     const std::vector<SiteOperator> &wanted) {
    const std::vector<std::size_t> *candidates = &start;
    while (true) {
      bool advanced = false;
      const auto &inc = tree_.incident_edges(site);
      for (std::size_t y : *candidates) {
        ++work_;
        const HyperEdge &h = hyperedges_[y];
        if (!(h.label == wanted[site])) continue;
        std::size_t unmarked = 0, slot = 0;
        for (std::size_t k = 0; k < h.vertices.size(); ++k)
          if (marked_[inc[k]] != h.vertices[k]) {
            ++unmarked;
            slot = k;
          }
        if (unmarked != 1) continue;
        const std::size_t e = inc[slot];
        const std::size_t v = h.vertices[slot];
        // A walk from the other side already fixed a different vertex here.
        if (marked_[e] != kNone) continue;
        if (attached(v, site).size() != 1) continue;
        marked_[e] = v;
        const std::size_t next = tree_.other_end(e, site);
        candidates = &attached(v, next);
        site = next;
        advanced = true;
        break;
      }
      if (!advanced) return;
    }
  }

  void enumerate_rec(const std::vector<std::size_t> &order, std::size_t pos, std::vector<std::size_t> &chosen,
                     std::vector<ProductTerm> &out) const {
    if (pos == order.size()) {
      ProductTerm t;
      for (std::size_t i = 0; i < chosen.size(); ++i) {
        const auto &label = hyperedges_[chosen[i]].label;
        if (!label.is_identity()) t.factors.emplace(tree_.site(i), label);
      }
      out.push_back(std::move(t));
      return;
    }
    const std::size_t i = order[pos];
    const std::vector<std::size_t> *cands = &site_hyperedges_[i];
    if (i != tree_.root_index()) {
      const std::size_t p = tree_.parent_index(i);
      const auto &pnb = tree_.neighbour_indices(p);
      std::size_t k = static_cast<std::size_t>(std::find(pnb.begin(), pnb.end(), i) - pnb.begin());
      cands = &attached(hyperedges_[chosen[p]].vertices[k], i);
    }
    for (std::size_t y : *cands) {
      chosen[i] = y;
      enumerate_rec(order, pos + 1, chosen, out);
    }
    chosen[i] = kNone;
  }

  TreeTopology tree_;
  std::vector<Vertex> vertices_;
  std::vector<HyperEdge> hyperedges_;
  std::vector<std::vector<std::size_t>> edge_vertices_;
  std::vector<std::vector<std::size_t>> site_hyperedges_;
  std::vector<ProductTerm> terms_;
  std::set<std::string> term_keys_;
  std::vector<std::size_t> marked_;
  std::size_t work_ = 0;
};

/// Value-semantics wrapper: returns a copy with `term` added.
inline StateDiagram add_term(StateDiagram diagram, const ProductTerm &term, AddTermOptions opts = {}) {
  diagram.add_term(term, opts);
  return diagram;
}

struct BuildOptions {
  bool reuse = true;
  /// Print a warning to stderr when the root is a leaf.
  bool warn_leaf_root = false;
};

/// Folds coefficients, builds the first term, then adds the rest in order.
inline StateDiagram from_hamiltonian(const Hamiltonian &h, BuildOptions opts = {}) {
  const auto &t = h.tree();
  if (opts.warn_leaf_root && t.size() > 2 && t.neighbour_indices(t.root_index()).size() == 1)
    std::cerr << "warning: root " << t.root() << " has a single neighbour; bond dimensions may be larger\n";
  StateDiagram d(t);
  for (std::size_t j = 0; j < h.size(); ++j) d.add_term(h.folded(j), AddTermOptions{.reuse = opts.reuse});
  return d;
}

/// Sorted multiset of term keys; equal iff the term multisets are equal.
inline std::vector<std::string> term_key_multiset(const std::vector<ProductTerm> &terms) {
  std::vector<std::string> keys;
  keys.reserve(terms.size());
  for (auto &t : terms) keys.push_back(t.key());
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace ttno

#endif  // TTNO_STATE_DIAGRAM_HPP
