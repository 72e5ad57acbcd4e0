// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: build, bench, cayley, oqs, plotdata.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttno/bench.hpp"
#include "ttno/closed_form.hpp"
#include "ttno/io.hpp"
#include "ttno/oqs.hpp"
#include "ttno/state_diagram.hpp"
#include "ttno/ttno.hpp"

namespace {

using namespace ttno;

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kValidation = 3,
  kMismatch = 4,
  kCap = 5,
};

constexpr double kVerifyTolerance = 1e-10;

std::ofstream open_out(const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  return os;
}

// Refuses to let any output path alias an input or another output.
void require_distinct(const std::vector<std::string> &inputs, const std::vector<std::string> &outputs) {
  std::vector<std::filesystem::path> seen;
  auto norm = [](const std::string &p) { return std::filesystem::weakly_canonical(std::filesystem::absolute(p)); };
  for (auto &p : inputs)
    if (!p.empty()) seen.push_back(norm(p));
  for (auto &p : outputs) {
    if (p.empty()) continue;
    const auto q = norm(p);
    if (std::find(seen.begin(), seen.end(), q) != seen.end())
      throw InputError("output path '" + p + "' collides with another input or output");
    seen.push_back(q);
  }
}

void write_bond_report(std::ostream &os, const std::map<Edge, std::size_t> &dims) {
  os << "edge,bond_dim\n";
  for (auto &[e, d] : dims) os << e.to_string() << ',' << d << '\n';
}

// --- build ---------------------------------------------------------------

struct BuildArgs {
  std::string tree, hamiltonian, out, report, check, diagram;
  std::optional<std::uint32_t> root;
  bool verify = false;
  bool naive = false;
};

int verify_against(const TTNO &ttno, const Hamiltonian &h) {
  const double dev = dense_deviation(ttno, h);
  if (!(dev <= kVerifyTolerance)) {
    std::cerr << "verification failed: max deviation " << format_csv_double(dev) << "\n";
    return kMismatch;
  }
  std::cout << "verified: max deviation " << format_csv_double(dev) << "\n";
  return kOk;
}

int run_build(const BuildArgs &a) {
  require_distinct({a.tree, a.hamiltonian, a.check}, {a.out, a.report, a.diagram});
  TreeTopology tree = io::load_tree(a.tree);
  if (a.root) tree = tree.rerooted(SiteId(*a.root));
  const Hamiltonian h = io::load_hamiltonian(a.hamiltonian, tree);
  if (!a.check.empty()) {
    const TTNO loaded = load_ttno(a.check);
    if (loaded.tree().nodes() != tree.nodes() || loaded.tree().edges() != tree.edges())
      throw ValidationError("TTNO dump was built on a different tree");
    return verify_against(loaded, h);
  }
  BuildOptions opts;
  opts.reuse = !a.naive;
  opts.warn_leaf_root = true;
  const StateDiagram d = from_hamiltonian(h, opts);
  const TTNO ttno = emit_tensors(d, h.registry());
  if (!a.out.empty()) save_ttno(a.out, ttno);
  if (!a.diagram.empty()) {
    auto os = open_out(a.diagram);
    os << d.dump();
  }
  const auto dims = ttno.bond_dimensions();
  if (!a.report.empty()) {
    auto os = open_out(a.report);
    write_bond_report(os, dims);
  }
  std::size_t max_dim = 0;
  for (auto &[e, dim] : dims) max_dim = std::max(max_dim, dim);
  std::cout << "sites " << tree.size() << "\nterms " << h.size() << "\nmax_bond_dim " << max_dim << "\nelements "
            << element_count(ttno) << "\n";
  if (a.verify) {
    // Verify what was written, not the in-memory copy.
    return verify_against(a.out.empty() ? ttno : load_ttno(a.out), h);
  }
  return kOk;
}

// --- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string tree, out, summary;
  std::vector<std::size_t> terms;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t max_support = 0;
  std::vector<std::string> labels{"X", "Y", "Z"};
  std::optional<std::uint32_t> root;
  bool root_at_leaf = false;
};

int run_bench_cmd(const BenchArgs &a) {
  require_distinct({a.tree}, {a.out, a.summary});
  TreeTopology tree = io::load_tree(a.tree);
  if (a.root && a.root_at_leaf) throw InputError("--root and --root-at-leaf are mutually exclusive");
  if (a.root) tree = tree.rerooted(SiteId(*a.root));
  if (a.root_at_leaf) tree = tree.rerooted(tree.leaves().back());
  BenchPlan plan;
  plan.term_counts = a.terms;
  plan.samples = a.samples;
  plan.seed = a.seed;
  plan.threads = a.threads;
  plan.config.labels = a.labels;
  plan.config.max_support = a.max_support;
  const auto records = run_bench(tree, plan);
  {
    auto os = open_out(a.out);
    write_records_csv(os, records);
  }
  const auto rows = summarize(records);
  if (!a.summary.empty()) {
    auto os = open_out(a.summary);
    write_summary_csv(os, rows);
  }
  write_summary_csv(std::cout, rows);
  return kOk;
}

// --- cayley --------------------------------------------------------------

struct CayleyArgs {
  int degree = 0, depth = 0;
  std::vector<int> ranges;
  bool all_to_all = false;
  std::string out;
};

int run_cayley(const CayleyArgs &a) {
  const CayleyTreeSpec spec{a.degree, a.depth};
  spec.validate();
  std::ostringstream table;
  table << "kappa,D,chi,closed_form,brute_force,uncorrected\n";
  bool disagree = false;
  std::vector<int> ranges = a.ranges;
  if (ranges.empty() && !a.all_to_all)
    for (int chi = 1; chi <= 2 * spec.depth - 1; ++chi) ranges.push_back(chi);
  for (int chi : ranges) {
    const auto closed = fixed_range_bond_bound(spec, chi);
    const auto brute = brute_force_root_bond(spec, chi);
    table << spec.degree << ',' << spec.depth << ',' << chi << ',' << closed << ',' << brute << ','
          << fixed_range_bond_bound_uncorrected(spec, chi) << '\n';
    if (closed != brute) disagree = true;
  }
  if (a.all_to_all) {
    const auto closed = all_to_all_bound(spec);
    const auto brute = brute_force_all_to_all_root_bond(spec);
    table << spec.degree << ',' << spec.depth << ",all," << closed << ',' << brute << ','
          << all_to_all_bound_uncorrected(spec) << '\n';
    if (closed != brute) disagree = true;
  }
  if (a.out.empty()) {
    std::cout << table.str();
  } else {
    auto os = open_out(a.out);
    os << table.str();
  }
  std::cerr << "sites " << cayley_site_count(spec) << " (uncorrected formula: " << cayley_site_count_uncorrected(spec) << ")\n";
  if (disagree) {
    std::cerr << "closed form and brute force disagree\n";
    return kMismatch;
  }
  return kOk;
}

// --- oqs -----------------------------------------------------------------

struct OqsArgs {
  std::string topology = "ftp", out, report, coupling = "split", crossover;
  int spins = 0, baths = 0, boson_dim = 2;
  double J = 1.0, g_re = 1.0, g_im = 0.0, omega = 1.0;
  int max_spins = 8, max_baths = 6;
};

int run_oqs(const OqsArgs &a) {
  require_distinct({}, {a.out, a.report, a.crossover});
  oqs::Spec spec;
  spec.spins = a.spins;
  spec.baths = a.baths;
  spec.boson_dim = a.boson_dim;
  spec.J = a.J;
  spec.g = Complex(a.g_re, a.g_im);
  spec.omega = a.omega;
  if (a.coupling == "split") spec.coupling = oqs::Coupling::kSplit;
  else if (a.coupling == "combined") spec.coupling = oqs::Coupling::kCombined;
  else throw InputError("unknown coupling form '" + a.coupling + "' (expected split or combined)");
  const auto kind = oqs::parse_topology(a.topology);
  const Hamiltonian h = oqs::hamiltonian(kind, spec);
  const TTNO ttno = build_ttno(h);
  if (!a.out.empty()) save_ttno(a.out, ttno);
  if (!a.report.empty()) {
    auto os = open_out(a.report);
    os << "site,role,legs,bond_dims,elements\n";
    for (auto &[s, ten] : ttno.tensors()) {
      std::string legs, dims;
      for (auto &l : ten.legs()) {
        legs += (legs.empty() ? "" : ";") + l.edge.to_string();
        dims += (dims.empty() ? "" : ";") + std::to_string(l.dim);
      }
      os << s << ',' << (oqs::is_spin(spec, s) ? "spin" : "boson") << ',' << legs << ',' << dims << ','
         << ten.data().size() << '\n';
    }
  }
  std::cout << "topology " << oqs::to_string(kind) << "\nsites " << h.tree().size() << "\nterms " << h.size()
            << "\nelements " << element_count(ttno) << "\n";
  if (!a.crossover.empty()) {
    auto os = open_out(a.crossover);
    os << "spins,baths,ftp_elements,chain_elements,ftp_smaller\n";
    for (int n = 2; n <= a.max_spins; ++n)
      for (int m = 1; m <= a.max_baths; ++m) {
        oqs::Spec s = spec;
        s.spins = n;
        s.baths = m;
        const auto f = element_count(build_ttno(oqs::hamiltonian(oqs::Topology::kFork, s)));
        const auto c = element_count(build_ttno(oqs::hamiltonian(oqs::Topology::kChain, s)));
        os << n << ',' << m << ',' << f << ',' << c << ',' << (f < c ? 1 : 0) << '\n';
      }
  }
  return kOk;
}

// --- plotdata ------------------------------------------------------------

struct PlotArgs {
  std::string records, summary, out_dir = ".";
};

int run_plotdata(const PlotArgs &a) {
  std::filesystem::create_directories(a.out_dir);
  const auto dir = std::filesystem::path(a.out_dir);
  require_distinct({a.records, a.summary},
                   {(dir / "histogram.dat").string(), (dir / "diagonal.dat").string(), (dir / "rdiff.dat").string()});
  if (!a.records.empty()) {
    std::ifstream is(a.records);
    if (!is) throw InputError("cannot open '" + a.records + "'");
    const auto hist = bond_histogram(is);
    auto h = open_out((dir / "histogram.dat").string());
    write_histogram_dat(h, hist);
    auto d = open_out((dir / "diagonal.dat").string());
    write_diagonal_dat(d, hist);
  }
  if (!a.summary.empty()) {
    std::ifstream is(a.summary);
    if (!is) throw InputError("cannot open '" + a.summary + "'");
    const auto rows = read_summary(is);
    auto r = open_out((dir / "rdiff.dat").string());
    write_rdiff_dat(r, rows);
  }
  if (a.records.empty() && a.summary.empty()) throw InputError("plotdata needs --records and/or --summary");
  return kOk;
}

int guarded(const std::function<int()> &f) {
  try {
    return f();
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const CapExceededError &e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const ValidationError &e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const UnknownLabelError &e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const InputError &e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Compile tree Hamiltonians into tree tensor network operators"};
  app.require_subcommand(1);
  int code = kOk;

  BuildArgs build;
  auto *b = app.add_subcommand("build", "Build a TTNO from JSON tree and Hamiltonian files");
  b->add_option("--tree", build.tree, "Tree JSON")->required();
  b->add_option("--hamiltonian", build.hamiltonian, "Hamiltonian JSON")->required();
  b->add_option("--out", build.out, "TTNO dump to write");
  b->add_option("--report", build.report, "Bond-dimension CSV to write");
  b->add_option("--diagram", build.diagram, "State-diagram dump to write");
  b->add_option("--root", build.root, "Override the tree root");
  b->add_flag("--verify", build.verify, "Check the written TTNO against the dense Hamiltonian");
  b->add_flag("--naive", build.naive, "Union of single-term diagrams without reuse");
  b->add_option("--check", build.check, "Verify an existing TTNO dump instead of building");
  b->callback([&] { code = guarded([&] { return run_build(build); }); });

  BenchArgs bench;
  auto *be = app.add_subcommand("bench", "Random-Hamiltonian benchmark against the rank oracle");
  be->add_option("--tree", bench.tree, "Tree JSON")->required();
  be->add_option("--terms", bench.terms, "Term counts")->required()->delimiter(',');
  be->add_option("--samples", bench.samples, "Samples per term count")->required();
  be->add_option("--seed", bench.seed, "Base seed (non-zero)")->required();
  be->add_option("--out", bench.out, "Per-edge records CSV")->required();
  be->add_option("--summary", bench.summary, "Summary CSV");
  be->add_option("--threads", bench.threads, "Worker threads");
  be->add_option("--max-support", bench.max_support, "Largest term support (0 = whole tree)");
  be->add_option("--labels", bench.labels, "Operator labels")->delimiter(',');
  be->add_option("--root", bench.root, "Override the tree root");
  be->add_flag("--root-at-leaf", bench.root_at_leaf, "Root the tree at its largest leaf id");
  be->callback([&] { code = guarded([&] { return run_bench_cmd(bench); }); });

  CayleyArgs cay;
  auto *c = app.add_subcommand("cayley", "Closed-form vs brute-force Cayley-tree bond dimensions");
  c->add_option("--degree", cay.degree, "Degree kappa")->required();
  c->add_option("--depth", cay.depth, "Depth D")->required();
  c->add_option("--range", cay.ranges, "Interaction range(s) chi")->delimiter(',');
  c->add_flag("--all-to-all", cay.all_to_all, "All ranges 1..2D-1");
  c->add_option("--out", cay.out, "CSV output (default stdout)");
  c->callback([&] { code = guarded([&] { return run_cayley(cay); }); });

  OqsArgs oq;
  auto *o = app.add_subcommand("oqs", "Spin chain coupled to bosonic baths");
  o->add_option("--topology", oq.topology, "chain, ftp or star");
  o->add_option("--spins", oq.spins, "Number of spins N")->required();
  o->add_option("--baths", oq.baths, "Bosons per spin M")->required();
  o->add_option("--boson-dim", oq.boson_dim, "Boson truncation");
  o->add_option("--J", oq.J, "Heisenberg coupling");
  o->add_option("--g-re", oq.g_re, "Spin-boson coupling, real part");
  o->add_option("--g-im", oq.g_im, "Spin-boson coupling, imaginary part");
  o->add_option("--omega", oq.omega, "Boson frequency");
  o->add_option("--coupling", oq.coupling, "split or combined");
  o->add_option("--out", oq.out, "TTNO dump to write");
  o->add_option("--report", oq.report, "Per-site CSV report");
  o->add_option("--crossover", oq.crossover, "FTP vs chain element-count table CSV");
  o->add_option("--max-spins", oq.max_spins, "Largest N in the crossover table");
  o->add_option("--max-baths", oq.max_baths, "Largest M in the crossover table");
  o->callback([&] { code = guarded([&] { return run_oqs(oq); }); });

  PlotArgs plot;
  auto *p = app.add_subcommand("plotdata", "Histogram and r_diff data files from bench CSVs");
  p->add_option("--records", plot.records, "Per-edge records CSV");
  p->add_option("--summary", plot.summary, "Summary CSV");
  p->add_option("--out-dir", plot.out_dir, "Output directory");
  p->callback([&] { code = guarded([&] { return run_plotdata(plot); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }
  return code;
}
