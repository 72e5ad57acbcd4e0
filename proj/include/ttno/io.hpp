// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_IO_HPP
#define TTNO_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ttno/common.hpp"
#include "ttno/hamiltonian.hpp"
#include "ttno/operators.hpp"
#include "ttno/tree.hpp"

namespace ttno::io {

using Json = nlohmann::json;

namespace detail {

inline std::string line_column(const std::string &text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline SiteId site_from_key(const std::string &key, const std::string &where) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(key, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != key.size() || v > 0xffffffffUL)
    throw ParseError(where + ": '" + key + "' is not a site id");
  return SiteId(static_cast<std::uint32_t>(v));
}

inline SiteId site_from_json(const Json &j, const std::string &where) {
  if (!j.is_number_unsigned()) throw ParseError(where + ": site ids must be non-negative integers");
  const auto v = j.get<std::uint64_t>();
  if (v > 0xffffffffULL) throw ParseError(where + ": site id out of range");
  return SiteId(static_cast<std::uint32_t>(v));
}

inline Complex complex_from_json(const Json &j, const std::string &where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ParseError(where + ": expected a number or [re, im]");
}

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

}  // namespace detail

/// Parses JSON text; syntax errors carry line and column.
inline Json parse_json(const std::string &text, const std::string &source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ParseError(source + ": malformed JSON at " + detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": " + e.what());
  }
}

inline std::string read_file(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// {"root": int, "phys_dims": {"id": int, ...}, "edges": [[a, b], ...]};
/// sites without an entry in phys_dims have dimension 2.
inline TreeTopology tree_from_json(const Json &j) {
  if (!j.is_object()) throw ParseError("tree: expected a JSON object");
  if (!j.contains("root")) throw ParseError("tree: missing 'root'");
  const SiteId root = detail::site_from_json(j.at("root"), "tree.root");
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    if (!j.at("edges").is_array()) throw ParseError("tree.edges: expected an array");
    for (const auto &e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("tree.edges: every edge must be [a, b]");
      edges.emplace_back(detail::site_from_json(e[0], "tree.edges"), detail::site_from_json(e[1], "tree.edges"));
    }
  }
  std::map<SiteId, int> dims;
  if (j.contains("phys_dims")) {
    if (!j.at("phys_dims").is_object()) throw ParseError("tree.phys_dims: expected an object");
    for (auto it = j.at("phys_dims").begin(); it != j.at("phys_dims").end(); ++it) {
      if (!it.value().is_number_integer()) throw ParseError("tree.phys_dims: dimensions must be integers");
      dims[detail::site_from_key(it.key(), "tree.phys_dims")] = it.value().get<int>();
    }
  }
  std::vector<SiteId> nodes{root};
  for (auto &e : edges) {
    nodes.push_back(e.a);
    nodes.push_back(e.b);
  }
  for (auto &[s, d] : dims) nodes.push_back(s);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return TreeTopology(nodes, edges, root, dims);
}

inline Json tree_to_json(const TreeTopology &t) {
  Json j;
  j["root"] = t.root().value;
  j["edges"] = Json::array();
  for (auto &e : t.edges()) j["edges"].push_back({e.a.value, e.b.value});
  j["phys_dims"] = Json::object();
  for (SiteId s : t.nodes()) j["phys_dims"][std::to_string(s.value)] = t.phys_dim(s);
  return j;
}

/// {"terms": [{"coeff": [re, im], "factors": {"id": "label", ...}}, ...],
///  "operators": {"label": [[[re, im], ...], ...], ...}}
///
/// Custom operator matrices are given row by row. Every factor label must
/// resolve in the registry at the dimension of its site.
inline Hamiltonian hamiltonian_from_json(const Json &j, const TreeTopology &tree) {
  if (!j.is_object()) throw ParseError("hamiltonian: expected a JSON object");
  OperatorRegistry reg;
  if (j.contains("operators")) {
    if (!j.at("operators").is_object()) throw ParseError("hamiltonian.operators: expected an object");
    for (auto it = j.at("operators").begin(); it != j.at("operators").end(); ++it) {
      const std::string where = "hamiltonian.operators." + it.key();
      const Json &rows = it.value();
      if (!rows.is_array() || rows.empty()) throw ParseError(where + ": expected a non-empty array of rows");
      const auto n = static_cast<Eigen::Index>(rows.size());
      DenseMatrix m(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const Json &row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
          throw ParseError(where + ": matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = detail::complex_from_json(row[static_cast<std::size_t>(c)], where);
      }
      reg.add(it.key(), std::move(m));
    }
  }
  if (!j.contains("terms") || !j.at("terms").is_array()) throw ParseError("hamiltonian: missing 'terms' array");
  std::vector<ProductTerm> terms;
  std::size_t k = 0;
  for (const auto &t : j.at("terms")) {
    const std::string where = "hamiltonian.terms[" + std::to_string(k++) + "]";
    if (!t.is_object()) throw ParseError(where + ": expected an object");
    ProductTerm term;
    if (t.contains("coeff")) term.coefficient = detail::complex_from_json(t.at("coeff"), where + ".coeff");
    if (t.contains("factors")) {
      if (!t.at("factors").is_object()) throw ParseError(where + ".factors: expected an object");
      for (auto it = t.at("factors").begin(); it != t.at("factors").end(); ++it) {
        const SiteId s = detail::site_from_key(it.key(), where + ".factors");
        if (!it.value().is_string()) throw ParseError(where + ".factors: labels must be strings");
        if (!tree.contains(s))
          throw ValidationError(where + " acts on site " + std::to_string(s.value) + " which is not in the tree");
        const std::string label = it.value().get<std::string>();
        if (!reg.contains(label, tree.phys_dim(s)))
          throw UnknownLabelError(where + ": no matrix for label '" + label + "' with dimension " +
                                  std::to_string(tree.phys_dim(s)));
        term.factors.emplace(s, SiteOperator(label, tree.phys_dim(s)));
      }
    }
    terms.push_back(std::move(term));
  }
  return Hamiltonian(tree, std::move(terms), std::move(reg));
}

inline Json hamiltonian_to_json(const Hamiltonian &h) {
  Json j;
  j["terms"] = Json::array();
  for (auto &t : h.terms()) {
    Json jt;
    jt["coeff"] = detail::complex_to_json(t.coefficient);
    jt["factors"] = Json::object();
    for (auto &[s, op] : t.factors) jt["factors"][std::to_string(s.value)] = op.label();
    j["terms"].push_back(jt);
  }
  if (!h.registry().custom().empty()) {
    j["operators"] = Json::object();
    for (auto &[key, m] : h.registry().custom()) {
      Json rows = Json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(detail::complex_to_json(m(r, c)));
        rows.push_back(row);
      }
      j["operators"][key.first] = rows;
    }
  }
  return j;
}

inline TreeTopology load_tree(const std::string &path) { return tree_from_json(parse_json(read_file(path), path)); }

inline Hamiltonian load_hamiltonian(const std::string &path, const TreeTopology &tree) {
  return hamiltonian_from_json(parse_json(read_file(path), path), tree);
}

}  // namespace ttno::io

#endif  // TTNO_IO_HPP
