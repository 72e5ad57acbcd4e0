// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_BENCH_HPP
#define TTNO_BENCH_HPP

#include <algorithm>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ttno/common.hpp"
#include "ttno/svd_reference.hpp"
#include "ttno/tree.hpp"

namespace ttno {

struct BenchPlan {
  std::vector<std::size_t> term_counts;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  BenchConfig config{};
};

/// Runs every (term count, sample) pair. Results are ordered by term count,
/// then sample index, independent of the thread schedule.
inline std::vector<BenchRecord> run_bench(const TreeTopology &tree, const BenchPlan &plan) {
  if (plan.seed == 0) throw InputError("benchmark seed must be explicit and non-zero");
  if (plan.samples == 0) throw InputError("benchmark needs at least one sample");
  if (plan.term_counts.empty()) throw InputError("benchmark needs at least one term count");
  // Fail early (and on the calling thread) if the oracle is out of reach.
  checked_hilbert_dim(tree, tree.preorder(), dense_cap());

  const std::size_t total = plan.term_counts.size() * plan.samples;
  std::vector<BenchRecord> out(total);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](unsigned worker, unsigned stride) {
    for (std::size_t k = worker; k < total; k += stride) {
      try {
        const std::size_t n_terms = plan.term_counts[k / plan.samples];
        const std::uint64_t seed = derive_seed(plan.seed, n_terms, k % plan.samples);
        out[k] = bench_sample(tree, n_terms, seed, plan.config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const unsigned threads = std::max(1u, plan.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (auto &t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct SummaryRow {
  std::size_t n_terms = 0;
  double r_diff = 0;
  std::size_t n_samples = 0;
  double std_error = 0;
};

inline std::vector<SummaryRow> summarize(const std::vector<BenchRecord> &records) {
  std::map<std::size_t, std::vector<BenchRecord>> by_terms;
  for (auto &r : records) by_terms[r.n_terms].push_back(r);
  std::vector<SummaryRow> out;
  for (auto &[n, recs] : by_terms) out.push_back({n, r_diff(recs), recs.size(), r_diff_standard_error(recs)});
  return out;
}

inline void write_records_csv(std::ostream &os, const std::vector<BenchRecord> &records) {
  os << "seed,n_terms,edge,alg_dim,opt_dim\n";
  for (auto &r : records)
    for (std::size_t k = 0; k < r.bonds.edges.size(); ++k)
      os << r.seed << ',' << r.n_terms << ',' << r.bonds.edges[k].to_string() << ',' << r.bonds.alg_dim[k] << ','
         << r.bonds.opt_dim[k] << '\n';
}

inline void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows) {
  os << "n_terms,r_diff,n_samples,std_error\n";
  for (auto &r : rows)
    os << r.n_terms << ',' << format_csv_double(r.r_diff) << ',' << r.n_samples << ',' << format_csv_double(r.std_error)
       << '\n';
}

// ---------------------------------------------------------------------------
// CSV reading for plot data.
// ---------------------------------------------------------------------------

using CsvTable = std::vector<std::vector<std::string>>;

/// Reads a comma-separated table with a header row; checks the header.
inline CsvTable read_csv(std::istream &is, const std::vector<std::string> &header) {
  auto split = [](const std::string &line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  if (!std::getline(is, line)) throw ParseError("CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto head = split(line);
  if (head.size() < header.size() || !std::equal(header.begin(), header.end(), head.begin()))
    throw ParseError("CSV header does not start with the expected columns");
  CsvTable rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != head.size())
      throw ParseError("CSV line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(head.size()));
    rows.push_back(std::move(cells));
  }
  return rows;
}

inline std::size_t parse_count(const std::string &s, const std::string &what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("malformed " + what + " '" + s + "'");
  return v;
}

inline double parse_real(const std::string &s, const std::string &what) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("malformed " + what + " '" + s + "'");
  return v;
}

/// (alg_dim, opt_dim) -> count, from a records CSV.
inline std::map<std::pair<std::size_t, std::size_t>, std::size_t> bond_histogram(std::istream &records_csv) {
  const auto rows = read_csv(records_csv, {"seed", "n_terms", "edge", "alg_dim", "opt_dim"});
  if (rows.empty()) throw ParseError("records CSV has no data rows");
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> hist;
  for (auto &r : rows) ++hist[{parse_count(r[3], "alg_dim"), parse_count(r[4], "opt_dim")}];
  return hist;
}

inline std::vector<SummaryRow> read_summary(std::istream &summary_csv) {
  const auto rows = read_csv(summary_csv, {"n_terms", "r_diff", "n_samples"});
  if (rows.empty()) throw ParseError("summary CSV has no data rows");
  std::vector<SummaryRow> out;
  for (auto &r : rows) {
    SummaryRow s;
    s.n_terms = parse_count(r[0], "n_terms");
    s.r_diff = parse_real(r[1], "r_diff");
    s.n_samples = parse_count(r[2], "n_samples");
    if (r.size() > 3) s.std_error = parse_real(r[3], "std_error");
    out.push_back(s);
  }
  return out;
}

/// Whitespace-separated "alg opt count" lines (gnuplot style).
inline void write_histogram_dat(std::ostream &os, const std::map<std::pair<std::size_t, std::size_t>, std::size_t> &hist) {
  os << "# alg_dim opt_dim count\n";
  for (auto &[k, n] : hist) os << k.first << ' ' << k.second << ' ' << n << '\n';
}

/// Reference line y = x over the histogram's range.
inline void write_diagonal_dat(std::ostream &os, const std::map<std::pair<std::size_t, std::size_t>, std::size_t> &hist) {
  std::size_t hi = 1;
  for (auto &[k, n] : hist) hi = std::max({hi, k.first, k.second});
  os << "# x y\n0 0\n" << hi << ' ' << hi << '\n';
}

inline void write_rdiff_dat(std::ostream &os, const std::vector<SummaryRow> &rows) {
  os << "# n_terms r_diff std_error n_samples\n";
  for (auto &r : rows)
    os << r.n_terms << ' ' << format_csv_double(r.r_diff) << ' ' << format_csv_double(r.std_error) << ' ' << r.n_samples
       << '\n';
}

}  // namespace ttno

#endif  // TTNO_BENCH_HPP
