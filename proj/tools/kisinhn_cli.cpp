// Command-line front end.
// Exit codes: 0 ok, 1 usage, 2 parse, 3 precision, 4 property failure.

#include "acceptance_suite.hpp"
#include "kisinhn/io.hpp"
#include "kisinhn/svg.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

using namespace kisinhn;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kPrecision = 3, kProperty = 4 };

struct Global {
  int jobs = 1;
  std::uint64_t seed = 20240601;
};

HodgeType parse_nu(const std::string& text) {
  HodgeType nu;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      nu.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw 0;
    } catch (...) {
      throw CLI::ValidationError("--nu", "expected comma-separated integers, got '" + text + "'");
    }
  }
  if (nu.empty() || !std::is_sorted(nu.begin(), nu.end()))
    throw CLI::ValidationError("--nu", "Hodge type must be a nonempty weakly increasing list");
  return nu;
}

std::string join(const std::vector<int>& v, const char* sep = " ") {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::string join(const std::vector<Rational>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + to_string(v[i]);
  return s;
}

std::string nu_tag(const HodgeType& nu) { return "(" + join(nu, ",") + ")"; }

EnumerationOptions enum_opts(const Global& g, int target) {
  EnumerationOptions o;
  o.jobs = g.jobs;
  o.target_precision = target;
  return o;
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string input, csv, svg;
  int target = 0;
};

int cmd_analyze(const Global& g, const AnalyzeArgs& a) {
  auto mf = parse_module(read_file(a.input));
  auto l = mf.lattice();
  auto o = enum_opts(g, a.target);
  auto P = hn_polygon_normalized(l, o);
  auto raw = hn_polygon(l, o);
  Field f = l.ctx();
  std::cout << "field: F_" << f->q() << " (p = " << f->p() << "), e = " << l.e() << "\n";
  std::cout << "rank: " << l.rank() << "\n";
  std::cout << "degree: " << to_string(l.degree()) << "\n";
  std::cout << "slope: " << to_string(l.slope()) << "\n";
  std::cout << "hodge divisors: " << join(l.hodge_divisors()) << "\n";
  std::cout << "hn polygon (normalized): " << P.to_string() << "\n";
  std::cout << "hn polygon (raw): " << raw.to_string() << "\n";
  std::cout << "hn slopes: " << join(P.slopes()) << "\n";
  if (l.effective())
    std::cout << "etale rank: " << etale_rank(l, P) << "\n";
  else
    std::cout << "etale rank: n/a (not effective)\n";
  bool ss = is_semistable(P);
  std::cout << "verdict: " << (ss ? "semistable" : "unstable") << ", deg " << to_string(l.degree()) << ", slope "
            << to_string(l.slope()) << "\n";
  if (!a.csv.empty()) {
    std::string csv = csv_row({"polygon", "x", "y"});
    for (auto& [x, y] : P.vertices()) csv += csv_row({"normalized", to_string(x), to_string(y)});
    for (auto& [x, y] : raw.vertices()) csv += csv_row({"raw", to_string(x), to_string(y)});
    write_file(a.csv, csv);
  }
  if (!a.svg.empty()) {
    FigureInput in{"HN polygon over the Hodge polygon", l.hodge_divisors(), {}, {P.scaled(1, l.e())}};
    write_file(a.svg, render_figure(in));
  }
  return kOk;
}

// ---- subobjects ----

int cmd_subobjects(const Global& g, const std::string& input, int rank, int target) {
  auto l = parse_module(read_file(input)).lattice();
  auto o = enum_opts(g, target);
  if (rank >= 0) {
    if (rank > l.rank()) throw DimensionMismatch("rank exceeds the lattice rank");
    auto rep = enumerate_stable(l.frobenius(), rank, o);
    std::cout << "stable rank-" << rank << " sublattices: " << rep.subspaces.size() << " (seed precision "
              << rep.seed_precision << ", target " << rep.target_precision << ")\n";
    for (auto& s : rep.subspaces)
      std::cout << "  deg " << to_string(sub_degree(l, s.basis)) << "  basis " << s.basis.basis.to_string() << "\n";
    return kOk;
  }
  auto cloud = subobject_cloud(l, o);
  std::cout << "phi-stable saturated sublattices (all ranks): " << cloud.size() << "\n";
  for (auto& c : cloud)
    std::cout << "  rank " << c.rank << "  deg " << to_string(c.deg) << "  basis " << c.witness.basis.to_string() << "\n";
  return kOk;
}

// ---- hn ----

int cmd_hn(const Global& g, const std::string& input, int target) {
  auto l = parse_module(read_file(input)).lattice();
  auto o = enum_opts(g, target);
  auto h = hn_filtration(l, o);
  std::cout << "hn polygon: " << h.polygon.to_string() << "\n";
  auto gr = hn_gradeds(l, h);
  bool ok = true;
  for (size_t i = 0; i < h.steps.size(); ++i) {
    bool ss = is_semistable(gr[i], o);
    ok = ok && ss;
    std::cout << "step " << i + 1 << ": rank " << h.steps[i].basis.cols() << ", graded slope " << to_string(h.slopes[i])
              << ", graded hodge divisors " << join(gr[i].hodge_divisors()) << (ss ? "" : " (NOT semistable)") << "\n";
    std::cout << "  basis " << h.steps[i].basis.to_string() << "\n";
  }
  if (!ok) {
    std::cerr << "property failure: a graded piece is not semistable\n";
    return kProperty;
  }
  return kOk;
}

// ---- tensor-experiment ----

int cmd_tensor(const Global& g, int pool_size, int max_rank, int max_height, const std::string& csv) {
  Rng rng(g.seed);
  PoolOptions po;
  po.size = pool_size;
  po.max_rank = max_rank;
  po.max_height = max_height;
  auto pool = sample_semistable_pool(rng, po);
  auto rep = run_tensor_experiment(pool, g.jobs);
  std::cout << "pool: " << rep.pool_size << " semistable lattices\n";
  std::cout << "pairs: " << rep.pairs.size() << "\n";
  std::cout << "counterexamples: " << rep.counterexamples() << "\n";
  for (auto& p : rep.pairs)
    if (!(p.semistable && p.additive))
      std::cout << "  " << pool[p.i].label << " x " << pool[p.j].label << " -> " << p.polygon << "\n";
  if (!csv.empty()) {
    std::string s = csv_row({"i", "j", "left", "right", "slope", "semistable", "additive", "polygon"});
    for (auto& p : rep.pairs)
      s += csv_row({std::to_string(p.i), std::to_string(p.j), pool[p.i].label, pool[p.j].label, to_string(p.mu),
                    p.semistable ? "1" : "0", p.additive ? "1" : "0", p.polygon});
    write_file(csv, s);
  }
  return rep.counterexamples() ? kProperty : kOk;
}

// ---- kempf ----

int cmd_kempf(const Global& g, const std::string& input, int extension) {
  auto in = parse_kempf_input(read_file(input));
  FqMatrix S = in.S;
  if (extension > 1) {
    Field big = field(in.field->p(), in.field->r() * extension);
    auto emb = embedding(in.field, big);
    FqMatrix T(big, S.rows, S.cols);
    for (int i = 0; i < S.rows; ++i)
      for (int j = 0; j < S.cols; ++j) T(i, j) = emb[S(i, j)];
    S = T;
  }
  KempfOptions ko;
  ko.jobs = g.jobs;
  std::cout << "space: F_" << S.ctx->q() << "^" << in.m << " (x) F_" << S.ctx->q() << "^" << in.n << ", dim S = " << S.rank()
            << "\n";
  auto r = kempf_filtration(S, in.m, in.n, ko);
  if (r.stable) {
    std::cout << "verdict: semistable\n";
    return kOk;
  }
  std::cout << "verdict: unstable\n";
  std::cout << "instability (squared): " << to_string(r.value2) << "\n";
  std::cout << "filtration on the first factor:\n" << format_filtered(r.pair.M);
  std::cout << "filtration on the second factor:\n" << format_filtered(r.pair.N);
  std::cout << "weight totals: " << to_string(r.pair.M.total()) << " " << to_string(r.pair.N.total()) << "\n";
  std::cout << "deg of S: " << to_string(deg_filtered(S, r.pair)) << "\n";
  FqMatrix K = kempf_semisimplify(S, r.pair);
  std::cout << "semisimplification:";
  for (int i = 0; i < K.rows; ++i) std::cout << " " << format_fq_row(K, i);
  std::cout << "\n";
  if (r.pair.M.total() != 0 || r.pair.N.total() != 0) {
    std::cerr << "property failure: maximizer weights do not sum to zero\n";
    return kProperty;
  }
  return kOk;
}

// ---- variety ----

struct VarietyArgs {
  std::string input, nu, csv, svg;
  int window = -1, extension = 1, counts = 0;
};

int cmd_variety(const Global& g, const VarietyArgs& a) {
  auto mf = parse_module(read_file(a.input));
  HodgeType nu = parse_nu(a.nu);
  VarietyOptions o;
  o.window = a.window;
  o.extension = a.extension;
  o.jobs = g.jobs;
  o.enumeration.jobs = 1;
  auto v = enumerate_points(mf.module, nu, o);
  std::cout << "hodge type: " << nu_tag(nu) << "\n";
  std::cout << "field: F_" << v.module.ctx()->q() << ", window: " << v.window << ", scanned: " << v.scanned << "\n";
  std::cout << "points: " << v.points.size() << "\n";
  std::cout << "completeness: " << v.completeness << "\n";
  if (!v.reason.empty()) std::cout << "reason: " << v.reason << "\n";
  bool ok = true;
  for (size_t i = 0; i < v.points.size(); ++i) {
    auto wj = wedge_contact_set(v.points[i], nu);
    bool agree = wj == v.J[i];
    ok = ok && agree;
    std::cout << "  point " << i << ": g = " << v.points[i].basis().to_string() << "\n";
    std::cout << "    hodge " << join(v.points[i].hodge_divisors()) << ", polygon " << v.polygons[i].to_string() << ", J "
              << format_set(v.J[i]) << (agree ? "" : " (wedge check gives " + format_set(wj) + ")") << "\n";
  }
  if (!v.points.empty()) {
    std::cout << "strata:\n";
    for (auto& [P, idx] : v.strata) {
      std::cout << "  " << P.to_string() << ": " << idx.size() << " point" << (idx.size() == 1 ? "" : "s") << ", J "
                << format_set(component_invariant(P, nu, v.module.e)) << "\n";
    }
    bool over = hn_over_hodge_check(v);
    bool within = realized_within_candidates(v);
    bool nested = semicontinuity_sets(v).nested;
    std::cout << "checks: hn over hodge " << (over ? "ok" : "FAILED") << ", within candidates " << (within ? "ok" : "FAILED")
              << ", semicontinuity " << (nested ? "ok" : "FAILED") << ", wedge contact sets " << (ok ? "ok" : "FAILED")
              << "\n";
    ok = ok && over && within && nested;
  }
  if (a.counts > 0) {
    VarietyOptions oc = o;
    oc.window = v.window;
    std::vector<int> c;
    for (long x : point_counts(mf.module, nu, a.counts, oc)) c.push_back(static_cast<int>(x));
    std::cout << "point counts over F_{q^m}, m = 1.." << a.counts << ": " << join(c) << "\n";
  }
  if (!a.csv.empty()) {
    std::string s = csv_row({"point", "hodge", "polygon", "J"});
    for (size_t i = 0; i < v.points.size(); ++i)
      s += csv_row({std::to_string(i), join(v.points[i].hodge_divisors()), v.polygons[i].to_string(), format_set(v.J[i])});
    write_file(a.csv, s);
  }
  if (!a.svg.empty()) {
    FigureInput in{"Kisin variety strata, nu = " + nu_tag(nu), nu, enumerate_candidate_polygons(nu), {}};
    for (auto& [P, idx] : v.strata) in.realized.push_back(P.scaled(1, v.module.e));
    write_file(a.svg, render_figure(in));
  }
  if (!ok) {
    std::cerr << "property failure in the variety checks\n";
    return kProperty;
  }
  return kOk;
}

// ---- figures ----

int cmd_figures(const std::string& nu_text, const std::string& out_dir) {
  std::vector<HodgeType> cases{{0, 0, 1}, {-1, 0, 1}, {-1, 0, 0, 1}};
  if (!nu_text.empty()) cases.push_back(parse_nu(nu_text));
  std::filesystem::create_directories(out_dir);
  for (auto& nu : cases) {
    auto cands = enumerate_candidate_polygons(nu);
    auto classes = color_classes(cands);
    std::string tag = join(nu, "_");
    std::string csv = csv_row({"polygon", "J", "class", "vertices"});
    for (size_t i = 0; i < cands.size(); ++i) {
      auto k = std::find(classes.begin(), classes.end(), cands[i].J) - classes.begin();
      csv += csv_row({std::to_string(i), format_set(cands[i].J), std::to_string(k), cands[i].polygon.to_string()});
    }
    auto base = (std::filesystem::path(out_dir) / ("candidates_" + tag)).string();
    write_file(base + ".csv", csv);
    write_file(base + ".svg", render_figure({"Candidate HN polygons, nu = " + nu_tag(nu), nu, cands, {}}));
    std::cout << "nu = " << nu_tag(nu) << ": " << cands.size() << " polygons, " << classes.size() << " classes -> " << base
              << ".{svg,csv}\n";
  }
  return kOk;
}

// ---- selftest ----

int cmd_selftest(const Global& g, bool full, const std::string& out) {
  suite::Config c;
  c.seed = g.seed;
  c.jobs = g.jobs;
  c.full = full;
  auto outs = suite::run_all(c);
  std::string rep = suite::report(c, outs);
  if (out.empty())
    std::cout << rep;
  else
    write_file(out, rep);
  bool all = std::all_of(outs.begin(), outs.end(), [](const suite::Outcome& o) { return o.pass; });
  return all ? kOk : kProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harder-Narasimhan analysis of mod p Kisin lattices"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.fallthrough();

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "invariants, HN polygon and semistability of a lattice");
  analyze->add_option("input", aa.input, "module file")->required();
  analyze->add_option("--csv", aa.csv, "write polygon vertices as CSV");
  analyze->add_option("--svg", aa.svg, "write the polygon as SVG");
  analyze->add_option("--precision", aa.target, "target precision for subobject search (0: automatic)");

  std::string so_in;
  int so_rank = -1, so_target = 0;
  auto* subobjects = app.add_subcommand("subobjects", "phi-stable saturated sublattices");
  subobjects->add_option("input", so_in, "module file")->required();
  subobjects->add_option("--rank", so_rank, "only this rank (default: all)");
  subobjects->add_option("--precision", so_target, "target precision (0: automatic)");

  std::string hn_in;
  int hn_target = 0;
  auto* hn = app.add_subcommand("hn", "Harder-Narasimhan filtration");
  hn->add_option("input", hn_in, "module file")->required();
  hn->add_option("--precision", hn_target, "target precision (0: automatic)");

  int pool = 50, max_rank = 2, max_height = 2;
  std::string te_csv;
  auto* tensor = app.add_subcommand("tensor-experiment", "tensor products of random semistable lattices");
  tensor->add_option("--pool", pool, "pool size")->check(CLI::PositiveNumber);
  tensor->add_option("--max-rank", max_rank, "largest rank in the pool")->check(CLI::Range(1, 3));
  tensor->add_option("--max-height", max_height, "Hodge divisors lie in [0, height * e]")->check(CLI::Range(0, 4));
  tensor->add_option("--csv", te_csv, "write one row per pair");

  std::string k_in;
  int k_ext = 1;
  auto* kempf = app.add_subcommand("kempf", "semistability and Kempf filtration of S in M (x) N");
  kempf->add_option("input", k_in, "kempf file")->required();
  kempf->add_option("--extension", k_ext, "work over F_{q^m}")->check(CLI::Range(1, 6));

  VarietyArgs va;
  auto* variety = app.add_subcommand("variety", "enumerate lattices of bounded Hodge type");
  variety->add_option("input", va.input, "module file")->required();
  variety->add_option("--nu", va.nu, "Hodge type, e.g. --nu=0,1")->required();
  variety->add_option("--window", va.window, "search window (default: derived from A and nu)");
  variety->add_option("--extension", va.extension, "enumerate over F_{q^m}")->check(CLI::Range(1, 4));
  variety->add_option("--counts", va.counts, "also report point counts over F_{q^m} for m up to this")->check(CLI::Range(0, 4));
  variety->add_option("--csv", va.csv, "write one row per point");
  variety->add_option("--svg", va.svg, "draw realized strata over the candidates");

  std::string fig_nu, fig_out = ".";
  auto* figures = app.add_subcommand("figures", "candidate HN polygons colored by contact set");
  figures->add_option("--nu", fig_nu, "additional Hodge type, e.g. --nu=-1,0,2");
  figures->add_option("--out", fig_out, "output directory");

  bool st_full = false;
  std::string st_out;
  auto* selftest = app.add_subcommand("selftest", "run the property suite");
  selftest->add_flag("--full", st_full, "full acceptance scale instead of desk scale");
  selftest->add_option("--out", st_out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(g, aa);
    if (*subobjects) return cmd_subobjects(g, so_in, so_rank, so_target);
    if (*hn) return cmd_hn(g, hn_in, hn_target);
    if (*tensor) return cmd_tensor(g, pool, max_rank, max_height, te_csv);
    if (*kempf) return cmd_kempf(g, k_in, k_ext);
    if (*variety) return cmd_variety(g, va);
    if (*figures) return cmd_figures(fig_nu, fig_out);
    if (*selftest) return cmd_selftest(g, st_full, st_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InsufficientPrecision& e) {
    std::cerr << "insufficient precision: " << e.what() << "\n";
    return kPrecision;
  } catch (const SeedPrecisionTooSmall& e) {
    std::cerr << "insufficient precision: " << e.what() << "\n";
    return kPrecision;
  } catch (const PropertyFailure& e) {
    std::cerr << "property failure: " << e.what() << "\n";
    return kProperty;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
