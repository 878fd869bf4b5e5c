// sps: command-line front end for quadratic subproduct systems.
//
// Exit codes: 0 all checks passed, 1 a verdict failed, 2 the input was rejected.

#include "sps/sps.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
using namespace sps;

struct Options {
  bool json_output = false;
  bool timing = false;
  ToleranceConfig tol;
};

struct Outcome {
  json inputs = json::object();
  json results = json::object();
  std::vector<std::string> lines;
  bool passed = true;
};

/// Input rejected before any computation (missing file and the like).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& message, std::string kind_name = "InputError")
      : std::runtime_error(message), kind(std::move(kind_name)) {}
  std::string kind;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path, "FileNotFound");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct LoadedIdeal {
  std::string path;
  IdealFile file;
  std::string digest;
};

LoadedIdeal load_ideal(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return {path, parse_ideal_file(text), digest(text)};
  } catch (const Error& e) {
    std::string where = path;
    if (e.line()) where += ":" + std::to_string(*e.line());
    if (e.line() && e.column()) where += ":" + std::to_string(*e.column());
    throw InputError(where + ": " + e.what(), std::string(to_string(e.kind())));
  }
}

json input_record(const LoadedIdeal& in) {
  json rels = json::array();
  for (const auto& g : in.file.ideal.generators()) rels.push_back(render(g, in.file.variables));
  return {{"file", in.path}, {"digest", in.digest}, {"variables", in.file.variables}, {"relations", rels}};
}

json series_json(const HilbertSeries& h) { return h.coefficients; }

std::string join_dims(const HilbertSeries& h) { return h.to_string(); }

int pick_level(int requested, std::size_t d) { return requested > 0 ? requested : default_max_level(d); }

json kgroups_json(const KGroups& k) {
  return {{"euler_class", k.euler},
          {"K0", k.k0.to_string()},
          {"K1", k.k1.to_string()},
          {"within_proven_hypotheses", k.within_hypotheses}};
}

// ---------------------------------------------------------------------------

Outcome cmd_fibres(const std::string& path, int level, const Options& opt) {
  const auto in = load_ideal(path);
  Outcome out;
  out.inputs = input_record(in);
  const std::size_t d = in.file.ideal.alphabet_size();
  const int n = pick_level(level, d);
  const auto s = build_quadratic(in.file.ideal, n, opt.tol);
  const auto h = hilbert_series(s);
  const auto anick = anick_lower_bound(static_cast<long long>(d), static_cast<long long>(s.r()), n);
  const bool anick_ok = geq(h, anick);
  out.results = {{"d", d}, {"r", s.r()}, {"max_level", n}, {"dims", series_json(h)}, {"improper", s.improper()}};
  out.results["few_relations"] = has_few_relations(s);
  out.lines.push_back("dims: " + join_dims(h));
  out.lines.push_back("d = " + std::to_string(d) + ", r = " + std::to_string(s.r()));
  if (s.improper()) out.lines.push_back("warning: ImproperIdeal (H_2 = 0)");
  if (n >= 3) {
    const bool generic = is_generic(s);
    out.results["generic_series"] =
        series_json(generic_series(static_cast<long long>(d), static_cast<long long>(s.r()), n));
    out.results["generic_up_to_level"] = generic;
    out.lines.push_back("generic up to level " + std::to_string(n) + ": " + (generic ? "true" : "false"));
  }
  out.results["anick_bound"] = series_json(anick);
  out.results["anick_bound_holds"] = anick_ok;
  out.lines.push_back(std::string("Anick bound: ") + (anick_ok ? "holds" : "VIOLATED"));
  out.passed = anick_ok;
  return out;
}

Outcome cmd_free_product(const std::string& p1, const std::string& p2, int level, bool verify, const Options& opt) {
  const auto a = load_ideal(p1);
  const auto b = load_ideal(p2);
  Outcome out;
  out.inputs = {{"first", input_record(a)}, {"second", input_record(b)}};
  const std::size_t d = a.file.ideal.alphabet_size() + b.file.ideal.alphabet_size();
  const int n = pick_level(level, d);
  const auto s1 = build_quadratic(a.file.ideal, n, opt.tol);
  const auto s2 = build_quadratic(b.file.ideal, n, opt.tol);
  const auto fp = free_product(s1, s2, n, opt.tol);
  const auto h = hilbert_series(fp);
  const auto h1 = hilbert_series(s1), h2 = hilbert_series(s2);
  const auto series = free_product_series(h1, h2, n);
  const auto fock = fock_free_product_dims(h1, h2, n);
  const bool series_ok = series == h;
  const bool fock_ok = fock == h;
  out.results = {{"d", fp.d()},
                 {"r", fp.r()},
                 {"max_level", n},
                 {"dims", series_json(h)},
                 {"factor_dims", {series_json(h1), series_json(h2)}},
                 {"series_formula", series_json(series)},
                 {"series_formula_matches", series_ok},
                 {"fock_free_product_dims", series_json(fock)},
                 {"fock_free_product_matches", fock_ok}};
  out.lines.push_back("dims: " + join_dims(h));
  out.lines.push_back(std::string("series h^-1 = h1^-1 + h2^-1 - 1: ") + (series_ok ? "matches" : "MISMATCH"));
  out.lines.push_back(std::string("Fock free product dims: ") + (fock_ok ? "match" : "MISMATCH"));
  out.passed = series_ok && fock_ok;
  if (verify) {
    json levels = json::array();
    for (int m = 1; m <= n; ++m) {
      json rec = {{"level", m}};
      try {
        const auto rep = verify_fibre_decomposition(s1, s2, fp, m);
        json blocks = json::array();
        for (const auto& e : rep.blocks) {
          blocks.push_back({{"start_factor", e.block.start_factor},
                            {"composition", e.block.composition.parts},
                            {"dim", e.dim}});
        }
        rec["blocks"] = blocks;
        rec["block_dim_sum"] = rep.block_dim_sum;
        rec["fibre_dim"] = rep.fibre_dim;
        rec["max_overlap"] = rep.max_overlap;
        rec["max_containment_residual"] = rep.max_containment;
        rec["passed"] = true;
        out.lines.push_back("decomposition level " + std::to_string(m) + ": " + std::to_string(rep.blocks.size()) +
                            " blocks, sum " + std::to_string(rep.block_dim_sum) + " = " +
                            std::to_string(rep.fibre_dim));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DecompositionMismatch) throw;
        rec["passed"] = false;
        rec["error"] = e.what();
        out.passed = false;
        out.lines.push_back("decomposition level " + std::to_string(m) + ": " + e.what());
      }
      levels.push_back(rec);
    }
    out.results["decomposition"] = levels;
  }
  return out;
}

NCPoly single_relation(const LoadedIdeal& in) {
  const auto& gens = in.file.ideal.generators();
  if (gens.size() != 1) throw InputError(in.path + ": expected exactly one relation");
  return gens.front();
}

json relation_report_json(const RelationReport& rep) {
  json rels = json::array();
  for (const auto& r : rep.relations) rels.push_back({{"relation", r.name}, {"residual", r.residual}, {"passed", r.passed}});
  return {{"zone_levels", {0, rep.zone_max_level}}, {"tolerance", rep.tolerance}, {"relations", rels},
          {"passed", rep.all_passed}};
}

Outcome cmd_tl_check(const std::string& path, int fock_levels, const Options& opt) {
  const auto in = load_ideal(path);
  Outcome out;
  out.inputs = input_record(in);
  const NCPoly p = single_relation(in);
  const auto check = is_temperley_lieb(p, opt.tol);
  out.results = {{"temperley_lieb", check.is_tl},
                 {"projection_residual", check.projection_residual},
                 {"unitarity_residual", check.unitarity_residual}};
  if (!check.is_tl) {
    out.results["error"] = "NotTemperleyLieb";
    out.lines.push_back("NotTemperleyLieb: A·conj(A) is not unitary up to scalar");
    out.passed = false;
    return out;
  }
  const int n = std::max(fock_levels, 3);
  const auto t = normalize_tl(p, n, opt.tol);
  const auto h = hilbert_series(t.system);
  out.results["lambda"] = t.lambda;
  out.results["q"] = t.q;
  out.results["trace"] = t.a.entries.squaredNorm();
  out.results["dims"] = series_json(h);
  out.results["generic_up_to_level"] = is_generic(t.system);
  out.lines.push_back("Temperley-Lieb: true, lambda = " + std::to_string(t.lambda) + ", q = " + std::to_string(t.q));
  out.lines.push_back("dims: " + join_dims(h));
  if (fock_levels > 0) {
    const auto f = build_fock(t.system, fock_levels);
    const auto rep = check_universal_relations(f, t.a, t.q, opt.tol);
    out.results["fock"] = relation_report_json(rep);
    for (const auto& r : rep.relations) {
      out.lines.push_back("  " + r.name + ": " + (r.passed ? "ok" : "FAIL") + " (" + std::to_string(r.residual) + ")");
    }
    out.passed = rep.all_passed;
  }
  return out;
}

Outcome cmd_wmaps(const std::string& p1, const std::string& p2, int level, const Options& opt) {
  const auto a = load_ideal(p1);
  const auto b = load_ideal(p2);
  Outcome out;
  out.inputs = {{"first", input_record(a)}, {"second", input_record(b)}};
  const int n = level > 0 ? level : 3;
  const auto t1 = normalize_tl(single_relation(a), n + 1, opt.tol);
  const auto t2 = normalize_tl(single_relation(b), n + 1, opt.tol);
  const std::vector<const TLSystem*> factors{&t1, &t2};
  const auto fp = free_product({&t1.system, &t2.system}, n + 1, opt.tol);
  out.results["q"] = {t1.q, t2.q};
  json wr = json::array();
  for (int k = 1; k <= n; ++k) {
    const auto rep = w_maps_free(factors, fp, k, opt.tol);
    wr.push_back({{"n", k},
                  {"shape", {rep.rows, rep.cols}},
                  {"isometry_residuals", rep.isometry_residuals},
                  {"cross_residual", rep.cross_residual},
                  {"leak_residual", rep.leak_residual},
                  {"unitary_left", rep.unitary_left},
                  {"unitary_right", rep.unitary_right},
                  {"passed", rep.passed}});
    out.passed = out.passed && rep.passed;
    out.lines.push_back("W_" + std::to_string(k) + "^R " + std::to_string(rep.rows) + "x" + std::to_string(rep.cols) +
                        ": |C^H C - 1| = " + std::to_string(rep.unitary_left) +
                        ", |C C^H - 1| = " + std::to_string(rep.unitary_right));
  }
  out.results["W_R"] = wr;
  json defects = json::array();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    json rows = json::array();
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (int k = 1; k <= n; ++k) {
      const double num = compact_defect_norm(factors, fp, i, k);
      const double closed = compact_defect_closed_form(k, factors[i]->q);
      const bool ok = std::abs(num - closed) <= opt.tol.check_abs_tol;
      monotone = monotone && num < prev;
      prev = num;
      out.passed = out.passed && ok;
      rows.push_back({{"n", k}, {"numeric", num}, {"closed_form", closed}, {"passed", ok}});
      out.lines.push_back("defect factor " + std::to_string(i + 1) + " n=" + std::to_string(k) + ": " +
                          std::to_string(num) + " vs " + std::to_string(closed));
    }
    out.passed = out.passed && monotone;
    defects.push_back({{"factor", i + 1}, {"table", rows}, {"monotone", monotone}});
  }
  out.results["compact_defect"] = defects;
  return out;
}

Outcome cmd_graph(const std::string& ma, const std::string& mb, int level, const Options& opt) {
  Outcome out;
  auto parse = [](const std::string& text, const char* which) {
    try {
      return parse_incidence(text);
    } catch (const Error& e) {
      throw InputError(std::string(which) + ": " + e.what(), std::string(to_string(e.kind())));
    }
  };
  const auto a = parse(ma, "--matrix-a");
  const auto b = parse(mb, "--matrix-b");
  out.inputs = {{"matrix_a", a.to_string()}, {"matrix_b", b.to_string()}};
  const auto j = graph_join(a, b);
  const int n = pick_level(level, j.size());
  const auto sj = monomial_system(j, n, opt.tol);
  const auto fp = free_product(monomial_system(a, n, opt.tol), monomial_system(b, n, opt.tol), n, opt.tol);
  const auto hj = hilbert_series(sj);
  const auto hf = hilbert_series(fp);
  const auto counts = transfer_counts(j, n);
  const bool ok = hj == hf && hj == counts;
  out.results = {{"join", j.to_string()},
                 {"max_level", n},
                 {"join_dims", series_json(hj)},
                 {"free_product_dims", series_json(hf)},
                 {"transfer_counts", series_json(counts)},
                 {"join_equals_free_product", ok}};
  out.lines.push_back("join " + j.to_string() + " dims: " + join_dims(hj));
  out.lines.push_back("free product dims: " + join_dims(hf));
  out.lines.push_back(std::string("join theorem: ") + (ok ? "holds" : "FAILS"));
  out.passed = ok;
  return out;
}

RepSpec parse_weights(const std::string& text, double q) {
  try {
    return parse_rep_spec(text, q);
  } catch (const Error& e) {
    throw InputError(std::string("--weights: ") + e.what(), std::string(to_string(e.kind())));
  }
}

Outcome cmd_suq2(const std::string& weights, double q, int level, const Options& opt) {
  Outcome out;
  const auto spec = parse_weights(weights, q);
  out.inputs = {{"weights", spec.to_string()}, {"q", q}};
  const int n = pick_level(level, spec.dimension());
  const auto s = suq2_system(spec, n, opt.tol);
  const auto h = hilbert_series(s);
  long long squares = 0;
  for (const auto& w : spec.weights) squares += static_cast<long long>(w.k) * w.k;
  const bool det_ok = static_cast<long long>(s.r()) == squares;
  out.results = {{"d", s.d()}, {"r", s.r()}, {"max_level", n}, {"dims", series_json(h)},
                 {"det_dim", s.r()}, {"det_dim_is_sum_of_squares", det_ok},
                 {"few_relations", has_few_relations(s)}};
  out.lines.push_back("dims: " + join_dims(h));
  out.lines.push_back("dim det = " + std::to_string(s.r()) + " (sum of squared multiplicities " +
                      std::to_string(squares) + ")");
  bool ok = det_ok;
  if (n >= 3) out.results["generic_up_to_level"] = is_generic(s);
  if (spec.multiplicity_free() && spec.weights.size() > 1) {
    std::vector<SubproductSystem> irreps;
    for (const auto& w : spec.weights) irreps.push_back(suq2_system(RepSpec{{w}, q}, n, opt.tol));
    std::vector<const SubproductSystem*> ptrs;
    for (const auto& x : irreps) ptrs.push_back(&x);
    const auto fp = free_product(ptrs, n, opt.tol);
    const bool same = hilbert_series(fp) == h;
    out.results["free_product_of_irreducibles_dims"] = series_json(hilbert_series(fp));
    out.results["multiplicity_free_factorization"] = same;
    out.lines.push_back(std::string("free product of irreducibles: ") + (same ? "same dims" : "DIFFERENT dims"));
    ok = ok && same;
  }
  if (spec.weights.size() == 1 && spec.weights[0].k > 1 && spec.weights[0].n >= 1) {
    const auto& w = spec.weights[0];
    const auto iso = isotypical_series(w.n, w.k, n);
    const bool same = iso.substituted == h;
    out.results["isotypical_series"] = series_json(iso.substituted);
    out.results["isotypical_matches"] = same;
    ok = ok && same;
  }
  const auto k = cuntz_pimsner_kgroups(s, opt.tol);
  out.results["cuntz_pimsner"] = kgroups_json(k);
  out.results["toeplitz"] = kgroups_json(toeplitz_kgroups(s, opt.tol));
  out.lines.push_back("K0 = " + k.k0.to_string() + ", K1 = " + k.k1.to_string() +
                      (k.within_hypotheses ? "" : " (outside proven hypotheses)"));
  out.passed = ok;
  return out;
}

Outcome cmd_ktheory(const std::string& path, const std::string& weights, double q, const Options& opt) {
  Outcome out;
  std::optional<SubproductSystem> s;
  if (!path.empty()) {
    const auto in = load_ideal(path);
    out.inputs = input_record(in);
    s = build_quadratic(in.file.ideal, 2, opt.tol);
  } else {
    const auto spec = parse_weights(weights, q);
    out.inputs = {{"weights", spec.to_string()}, {"q", q}};
    s = suq2_system(spec, 2, opt.tol);
  }
  const auto k = cuntz_pimsner_kgroups(*s, opt.tol);
  const auto t = toeplitz_kgroups(*s, opt.tol);
  out.results = {{"d", s->d()}, {"r", s->r()}, {"cuntz_pimsner", kgroups_json(k)}, {"toeplitz", kgroups_json(t)}};
  out.lines.push_back("chi = " + std::to_string(k.euler));
  out.lines.push_back("K0(O) = " + k.k0.to_string() + ", K1(O) = " + k.k1.to_string());
  out.lines.push_back("K0(T) = " + t.k0.to_string() + ", K1(T) = " + t.k1.to_string());
  if (!k.within_hypotheses) out.lines.push_back("note: outside proven hypotheses");
  return out;
}

/// Random Gaussian relation spaces; reports how often the dims follow the generic recurrence.
Outcome cmd_sample(std::uint64_t seed, int count, int d, int r, int level, const Options& opt) {
  if (d < 1 || r < 0 || r > d * d || count < 1 || level < 2) throw InputError("invalid sampling parameters");
  Outcome out;
  out.inputs = {{"seed", seed}, {"count", count}, {"d", d}, {"r", r}, {"level", level}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const auto expected = generic_series(d, r, level);
  int matches = 0;
  bool anick_ok = true;
  json samples = json::array();
  for (int k = 0; k < count; ++k) {
    Matrix rel(d * d, r);
    for (Index i = 0; i < rel.rows(); ++i)
      for (Index j = 0; j < rel.cols(); ++j) rel(i, j) = Complex(gauss(rng), gauss(rng));
    const auto s = build_from_relations(static_cast<std::size_t>(d), span(rel, opt.tol), level, opt.tol);
    const auto h = hilbert_series(s);
    const bool generic = h == expected;
    matches += generic;
    anick_ok = anick_ok && geq(h, anick_lower_bound(d, r, level));
    samples.push_back({{"dims", series_json(h)}, {"generic", generic}});
  }
  out.results = {{"expected", series_json(expected)}, {"matches", matches}, {"samples", samples},
                 {"anick_bound_holds", anick_ok}};
  out.lines.push_back("generic: " + std::to_string(matches) + "/" + std::to_string(count));
  out.passed = anick_ok;
  return out;
}

int classify(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownVariable:
    case ErrorKind::NotHomogeneous:
    case ErrorKind::ZeroPolynomial:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::BudgetExceeded:
    case ErrorKind::EmptyAlphabet:
    case ErrorKind::OutOfRange:
    case ErrorKind::QOutOfRange:
    case ErrorKind::ZeroRowOrColumn:
    case ErrorKind::InvalidArgument:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic subproduct systems: fibres, free products, Temperley-Lieb checks, K-theory"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_flag("--json", opt.json_output, "Machine-readable report");
  app.add_flag("--timing", opt.timing, "Include runtime in the report");
  app.add_option("--rank-tol", opt.tol.rank_rel_tol, "Relative rank tolerance");
  app.add_option("--check-tol", opt.tol.check_abs_tol, "Absolute tolerance for residual checks");

  int level = 0;
  std::string file1, file2, matrix_a, matrix_b, weights;
  bool verify = false;
  int fock_levels = 0;
  double q = 1.0;
  std::uint64_t seed = 1;
  int count = 20, sample_d = 3, sample_r = 2;

  auto* fibres = app.add_subcommand("fibres", "Fibre dimensions and genericity of a quadratic ideal");
  fibres->add_option("file", file1, "Ideal file")->required();
  fibres->add_option("--level", level, "Top level N");

  auto* fp = app.add_subcommand("free-product", "Free product of two quadratic systems");
  fp->add_option("file1", file1)->required();
  fp->add_option("file2", file2)->required();
  fp->add_option("--level", level, "Top level N");
  fp->add_flag("--verify-decomposition", verify, "Check the alternating block decomposition");

  auto* tlc = app.add_subcommand("tl-check", "Temperley-Lieb test and Toeplitz relations");
  tlc->add_option("file", file1)->required();
  tlc->add_option("--fock", fock_levels, "Truncated Fock space levels");

  auto* wm = app.add_subcommand("wmaps", "W_n^R unitarity and compact defects for two TL factors");
  wm->add_option("file1", file1)->required();
  wm->add_option("file2", file2)->required();
  wm->add_option("--level", level, "Largest n");

  auto* gr = app.add_subcommand("graph", "Graph join versus free product of monomial systems");
  gr->add_option("--matrix-a", matrix_a, "Rows of 0/1 digits, e.g. 01,11")->required();
  gr->add_option("--matrix-b", matrix_b, "Rows of 0/1 digits")->required();
  gr->add_option("--level", level, "Top level N");

  auto* sq = app.add_subcommand("suq2", "SU_q(2) determinant systems");
  sq->add_option("--weights", weights, "weight:multiplicity pairs, e.g. 1:1,2:1")->required();
  sq->add_option("--q", q, "Deformation parameter in (0, 1]");
  sq->add_option("--level", level, "Top level N");

  auto* kt = app.add_subcommand("ktheory", "K-groups of the Cuntz-Pimsner and Toeplitz algebras");
  kt->add_option("file", file1, "Ideal file");
  kt->add_option("--weights", weights, "SU_q(2) weight spec instead of a file");
  kt->add_option("--q", q, "Deformation parameter in (0, 1]");

  auto* sm = app.add_subcommand("sample", "Random relation spaces against the generic recurrence");
  sm->add_option("--seed", seed, "Random seed");
  sm->add_option("--count", count, "Number of samples");
  sm->add_option("--d", sample_d, "Number of variables");
  sm->add_option("--r", sample_r, "Number of relations");
  sm->add_option("--level", level, "Top level N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  std::string command;
  int exit_code = 0;
  Outcome out;
  json error = nullptr;
  try {
    opt.tol.validate();
    if (*fibres) {
      command = "fibres";
      out = cmd_fibres(file1, level, opt);
    } else if (*fp) {
      command = "free-product";
      out = cmd_free_product(file1, file2, level, verify, opt);
    } else if (*tlc) {
      command = "tl-check";
      out = cmd_tl_check(file1, fock_levels, opt);
    } else if (*wm) {
      command = "wmaps";
      out = cmd_wmaps(file1, file2, level, opt);
    } else if (*gr) {
      command = "graph";
      out = cmd_graph(matrix_a, matrix_b, level, opt);
    } else if (*sq) {
      command = "suq2";
      out = cmd_suq2(weights, q, level, opt);
    } else if (*kt) {
      command = "ktheory";
      if (file1.empty() == weights.empty()) throw InputError("give either an ideal file or --weights");
      out = cmd_ktheory(file1, weights, q, opt);
    } else if (*sm) {
      command = "sample";
      out = cmd_sample(seed, count, sample_d, sample_r, level > 0 ? level : 5, opt);
    }
    exit_code = out.passed ? 0 : 1;
  } catch (const InputError& e) {
    error = {{"kind", e.kind}, {"message", e.what()}};
    exit_code = 2;
  } catch (const Error& e) {
    error = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    exit_code = classify(e.kind());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (opt.json_output) {
    json report = {{"schema", 1}, {"command", command}};
    report["inputs"] = out.inputs;
    report["tolerances"] = {{"rank_rel_tol", opt.tol.rank_rel_tol}, {"check_abs_tol", opt.tol.check_abs_tol}};
    report["results"] = out.results;
    if (!error.is_null()) report["error"] = error;
    report["passed"] = exit_code == 0;
    if (opt.timing) report["runtime_seconds"] = seconds;
    std::cout << report.dump(2) << "\n";
  } else {
    for (const auto& line : out.lines) std::cout << line << "\n";
    if (!error.is_null()) std::cerr << "error: " << error["message"].get<std::string>() << "\n";
    if (opt.timing) std::cout << "runtime: " << seconds << " s\n";
  }
  return exit_code;
}
