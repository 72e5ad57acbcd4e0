// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_TREE_HPP
#define TTNO_TREE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "ttno/common.hpp"

namespace ttno {

/// Rooted, unordered tree over quantum sites.
///
/// The tree is stored undirected; parent/child relations are derived from
/// the recorded root. Nodes are kept in ascending SiteId order, which is the
/// canonical iteration order for everything built on top of a tree. Internally
/// every node also has a dense index (its position in `nodes()`), and every
/// edge has an index (its position in `edges()`).
class TreeTopology {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  TreeTopology() = default;

  /// Throws ValidationError if the graph is not a tree containing `root`.
  TreeTopology(std::vector<SiteId> nodes, std::vector<Edge> edges, SiteId root,
               const std::map<SiteId, int> &phys_dims = {}, int default_dim = 2)
      : nodes_(std::move(nodes)), edges_(std::move(edges)), root_(root) {
    std::sort(nodes_.begin(), nodes_.end());
    if (nodes_.empty()) throw ValidationError("tree has no nodes");
    if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
      throw ValidationError("duplicate site id in tree");
    for (auto &e : edges_) {
      if (e.a == e.b) throw ValidationError("self-loop on site " + std::to_string(e.a.value));
      if (!contains(e.a) || !contains(e.b))
        throw ValidationError("edge endpoint is not a node of the tree");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw ValidationError("duplicate edge in tree");
    if (edges_.size() + 1 != nodes_.size())
      throw ValidationError("a tree on " + std::to_string(nodes_.size()) + " nodes needs " +
                            std::to_string(nodes_.size() - 1) + " edges, got " +
                            std::to_string(edges_.size()));
    if (!contains(root_)) throw ValidationError("root is not a node of the tree");

    const std::size_t n = nodes_.size();
    adjacency_.assign(n, {});
    incident_.assign(n, {});
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      std::size_t i = index_unchecked(edges_[k].a), j = index_unchecked(edges_[k].b);
      adjacency_[i].push_back(j);
      adjacency_[j].push_back(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(adjacency_[i].begin(), adjacency_[i].end());
      for (std::size_t j : adjacency_[i]) incident_[i].push_back(edge_index_unchecked(i, j));
    }

    phys_dims_.assign(n, default_dim);
    for (auto &[s, d] : phys_dims) {
      if (!contains(s)) throw ValidationError("physical dimension given for unknown site");
      if (d < 1) throw ValidationError("physical dimension must be >= 1");
      phys_dims_[index_unchecked(s)] = d;
    }
    if (default_dim < 1) throw ValidationError("physical dimension must be >= 1");

    // BFS from the root: connectivity check plus parent/depth.
    root_index_ = index_unchecked(root_);
    parent_.assign(n, npos);
    level_.assign(n, -1);
    order_.clear();
    std::queue<std::size_t> q;
    q.push(root_index_);
    level_[root_index_] = 0;
    while (!q.empty()) {
      std::size_t i = q.front();
      q.pop();
      order_.push_back(i);
      for (std::size_t j : adjacency_[i]) {
        if (level_[j] >= 0) continue;
        level_[j] = level_[i] + 1;
        parent_[j] = i;
        q.push(j);
      }
    }
    if (order_.size() != n) throw ValidationError("tree is not connected");
  }

  /// Nodes are inferred from the edge list (plus the root).
  static TreeTopology from_edges(const std::vector<Edge> &edges, SiteId root,
                                 const std::map<SiteId, int> &phys_dims = {}, int default_dim = 2) {
    std::vector<SiteId> nodes{root};
    for (auto &e : edges) {
      nodes.push_back(e.a);
      nodes.push_back(e.b);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return TreeTopology(std::move(nodes), edges, root, phys_dims, default_dim);
  }

  /// Same undirected tree and dimensions with a different root.
  TreeTopology rerooted(SiteId new_root) const {
    index_of(new_root);
    return TreeTopology(nodes_, edges_, new_root, phys_dim_map());
  }

  const std::vector<SiteId> &nodes() const { return nodes_; }
  const std::vector<Edge> &edges() const { return edges_; }
  SiteId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool contains(SiteId s) const { return std::binary_search(nodes_.begin(), nodes_.end(), s); }

  std::size_t index_of(SiteId s) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s);
    if (it == nodes_.end() || *it != s)
      throw InputError("unknown site id " + std::to_string(s.value));
    return static_cast<std::size_t>(it - nodes_.begin());
  }
  SiteId site(std::size_t index) const { return nodes_.at(index); }

  int phys_dim(SiteId s) const { return phys_dims_[index_of(s)]; }
  int phys_dim_at(std::size_t i) const { return phys_dims_[i]; }
  std::map<SiteId, int> phys_dim_map() const {
    std::map<SiteId, int> m;
    for (std::size_t i = 0; i < nodes_.size(); ++i) m[nodes_[i]] = phys_dims_[i];
    return m;
  }

  std::vector<SiteId> neighbours(SiteId s) const { return to_sites(adjacency_[index_of(s)]); }

  std::optional<SiteId> parent(SiteId s) const {
    std::size_t p = parent_[index_of(s)];
    if (p == npos) return std::nullopt;
    return nodes_[p];
  }

  std::vector<SiteId> children(SiteId s) const { return to_sites(children_indices(index_of(s))); }

  bool is_leaf(SiteId s) const { return children_indices(index_of(s)).empty(); }

  /// Nodes without children. The root is a leaf only in a single-node tree.
  std::vector<SiteId> leaves() const {
    std::vector<SiteId> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (children_indices(i).empty()) out.push_back(nodes_[i]);
    return out;
  }

  /// Maximum distance from the root.
  int depth() const { return *std::max_element(level_.begin(), level_.end()); }
  int level(SiteId s) const { return level_[index_of(s)]; }

  /// Index of the edge joining two adjacent sites.
  std::size_t edge_index(SiteId x, SiteId y) const {
    Edge e(x, y);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e)
      throw InputError("sites " + std::to_string(x.value) + " and " + std::to_string(y.value) +
                       " are not adjacent");
    return static_cast<std::size_t>(it - edges_.begin());
  }

  // Index-level access used by the construction algorithms.
  const std::vector<std::size_t> &neighbour_indices(std::size_t i) const { return adjacency_[i]; }
  /// Edge indices incident to node i, aligned with neighbour_indices(i).
  const std::vector<std::size_t> &incident_edges(std::size_t i) const { return incident_[i]; }
  std::size_t parent_index(std::size_t i) const { return parent_[i]; }
  std::size_t root_index() const { return root_index_; }
  std::vector<std::size_t> children_indices(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j : adjacency_[i])
      if (j != parent_[i]) out.push_back(j);
    return out;
  }
  /// For edge k and one of its endpoints i, the other endpoint.
  std::size_t other_end(std::size_t edge, std::size_t i) const {
    std::size_t a = index_unchecked(edges_[edge].a);
    return a == i ? index_unchecked(edges_[edge].b) : a;
  }
  /// Endpoint of edge k farther from the root.
  std::size_t lower_end(std::size_t edge) const {
    std::size_t a = index_unchecked(edges_[edge].a), b = index_unchecked(edges_[edge].b);
    return parent_[a] == b ? a : b;
  }
  /// Node indices in BFS order from the root.
  const std::vector<std::size_t> &bfs_order() const { return order_; }

  /// Depth-first pre-order from the root, children ascending.
  std::vector<SiteId> preorder() const {
    std::vector<SiteId> out;
    std::vector<std::size_t> stack{root_index_};
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      out.push_back(nodes_[i]);
      auto ch = children_indices(i);
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "root=" << root_ << " edges=";
    for (auto &e : edges_) os << e;
    return os.str();
  }

 private:
  std::size_t index_unchecked(SiteId s) const {
    return static_cast<std::size_t>(std::lower_bound(nodes_.begin(), nodes_.end(), s) - nodes_.begin());
  }
  std::size_t edge_index_unchecked(std::size_t i, std::size_t j) const {
    Edge e(nodes_[i], nodes_[j]);
    return static_cast<std::size_t>(std::lower_bound(edges_.begin(), edges_.end(), e) - edges_.begin());
  }
  std::vector<SiteId> to_sites(const std::vector<std::size_t> &idx) const {
    std::vector<SiteId> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(nodes_[i]);
    return out;
  }

  std::vector<SiteId> nodes_;
  std::vector<Edge> edges_;
  SiteId root_;
  std::size_t root_index_ = 0;
  std::vector<int> phys_dims_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::size_t> parent_;
  std::vector<int> level_;
  std::vector<std::size_t> order_;
};

/// Unique shortest route between two sites.
struct Route {
  std::vector<SiteId> nodes;
  std::vector<Edge> edges;
};

inline Route route(const TreeTopology &t, SiteId a, SiteId b) {
  std::size_t i = t.index_of(a), j = t.index_of(b);
  // Climb from the deeper end until both meet.
  std::vector<std::size_t> up, down;
  auto lvl = [&](std::size_t k) { return t.level(t.site(k)); };
  while (i != j) {
    if (lvl(i) >= lvl(j)) {
      up.push_back(i);
      i = t.parent_index(i);
    } else {
      down.push_back(j);
      j = t.parent_index(j);
    }
  }
  up.push_back(i);
  Route r;
  for (std::size_t k : up) r.nodes.push_back(t.site(k));
  for (auto it = down.rbegin(); it != down.rend(); ++it) r.nodes.push_back(t.site(*it));
  for (std::size_t k = 1; k < r.nodes.size(); ++k) r.edges.emplace_back(r.nodes[k - 1], r.nodes[k]);
  return r;
}

inline int distance(const TreeTopology &t, SiteId a, SiteId b) {
  return static_cast<int>(route(t, a, b).edges.size());
}

/// Distances from one site to every node, indexed like t.nodes().
inline std::vector<int> distances_from(const TreeTopology &t, SiteId center) {
  std::vector<int> dist(t.size(), -1);
  std::size_t c = t.index_of(center);
  std::queue<std::size_t> q;
  q.push(c);
  dist[c] = 0;
  while (!q.empty()) {
    std::size_t i = q.front();
    q.pop();
    for (std::size_t j : t.neighbour_indices(i)) {
      if (dist[j] >= 0) continue;
      dist[j] = dist[i] + 1;
      q.push(j);
    }
  }
  return dist;
}

/// All sites within `radius` of `center`, ascending.
inline std::vector<SiteId> ball(const TreeTopology &t, SiteId center, int radius) {
  if (radius < 0) throw InputError("ball radius must be non-negative");
  auto dist = distances_from(t, center);
  std::vector<SiteId> out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (dist[i] <= radius) out.push_back(t.site(i));
  return out;
}

/// Sites at distance exactly `radius` from `center`, ascending.
inline std::vector<SiteId> boundary(const TreeTopology &t, SiteId center, int radius) {
  if (radius < 0) throw InputError("boundary radius must be non-negative");
  auto dist = distances_from(t, center);
  std::vector<SiteId> out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (dist[i] == radius) out.push_back(t.site(i));
  return out;
}

/// Sites whose route to the root passes through `s` (including `s`), ascending.
inline std::vector<SiteId> subtree(const TreeTopology &t, SiteId s) {
  std::size_t top = t.index_of(s);
  std::vector<char> in(t.size(), 0);
  in[top] = 1;
  for (std::size_t i : t.bfs_order())
    if (i != t.root_index() && in[t.parent_index(i)]) in[i] = 1;
  std::vector<SiteId> out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (in[i]) out.push_back(t.site(i));
  return out;
}

/// Membership mask of the side of `edge` that contains `side`.
inline std::vector<char> edge_side_mask(const TreeTopology &t, std::size_t edge, std::size_t side) {
  std::size_t lower = t.lower_end(edge);
  std::vector<char> in(t.size(), 0);
  in[lower] = 1;
  for (std::size_t i : t.bfs_order())
    if (i != t.root_index() && in[t.parent_index(i)]) in[i] = 1;
  if (side != lower)
    for (auto &c : in) c = !c;
  return in;
}

}  // namespace ttno

#endif  // TTNO_TREE_HPP
