#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psdrank/boundary_ideal.hpp"
#include "psdrank/conic_nesting.hpp"
#include "psdrank/dimension_probe.hpp"
#include "psdrank/errors.hpp"
#include "psdrank/io.hpp"
#include "psdrank/psd_factorization.hpp"
#include "psdrank/spectrahedra.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using namespace psdrank;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kNegative = 1, kInputError = 2, kUndecided = 3 };

struct Context {
  std::string output;  // empty: stdout
  std::string format;
  std::uint64_t seed = 1;
  std::string config_text;
  std::string config_hash;

  Json meta() const { return Json{{"tool", "psdrank"}, {"version", kVersion}, {"config_hash", config_hash}}; }
  std::string header_comment(const char* lead) const {
    return std::string(lead) + " psdrank " + kVersion + " config " + config_hash + "\n";
  }
  void emit(const std::string& text) const {
    if (output.empty()) {
      std::cout << text;
      return;
    }
    write_file(output, text);
  }
  static void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
    out << text;
  }
  void emit_json(Json j) const {
    j["meta"] = meta();
    emit(j.dump(2) + "\n");
  }
};

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string fixed(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

RationalMatrix load_matrix(const std::string& path, bool drop_zero) {
  RationalMatrix m = read_matrix_file(path);
  return drop_zero ? drop_zero_rows(m) : m;
}

Eigen::MatrixXd to_eigen(const RationalMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
  return out;
}

std::vector<std::size_t> parse_rank_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(static_cast<std::size_t>(std::stoul(tok)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad rank list '" + s + "'");
    }
  }
  return out;
}

std::vector<Rational> grid(const Rational& lo, const Rational& hi, const Rational& step) {
  if (!(step > 0) || hi < lo) throw Error(ErrorCode::ParseError, "empty grid range");
  std::vector<Rational> out;
  for (Rational x = lo; x <= hi; x += step) out.push_back(x);
  return out;
}

Json square_sweep_json(const std::vector<SquareCaseRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back(Json{{"k", r.k},
                       {"p", r.k + 1},
                       {"q", r.k + 1},
                       {"jacobian_rank", r.result.jacobian_rank},
                       {"expected", r.expected},
                       {"matches", r.matches},
                       {"seed_stable", r.seed_stable},
                       {"modular_agree", r.result.modular_agree}});
  return arr;
}

Json probe_json(const RankAssignment& a, const ProbeResult& r) {
  return Json{{"p", a.p},
              {"q", a.q},
              {"k", a.k},
              {"ranks", a.to_string()},
              {"jacobian_rank", r.jacobian_rank},
              {"target", r.target},
              {"ambient_dim", r.ambient_dim},
              {"parameter_count", r.parameter_count},
              {"is_candidate", r.is_candidate},
              {"seed", r.seed},
              {"primes", r.primes},
              {"modular_ranks", r.modular_ranks},
              {"modular_agree", r.modular_agree}};
}

std::string table1_markdown(const std::vector<SweepRow>& rows, bool include_unlisted) {
  std::ostringstream os;
  os << "| psd rank | p | q | ranks | rank(J) | pq-1 | candidate | listed |\n";
  os << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    if (!r.listed && !include_unlisted) continue;
    os << "| " << r.assignment.k << " | " << r.assignment.p << " | " << r.assignment.q << " | "
       << r.assignment.to_string() << " | " << r.result.jacobian_rank << " | " << r.result.target << " | "
       << (r.result.is_candidate ? "yes" : "no") << " | " << (r.listed ? "yes" : "no") << " |\n";
  }
  return os.str();
}

std::string table1_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "k,p,q,ranks,jacobian_rank,target,is_candidate,listed,modular_agree\n";
  for (const auto& r : rows)
    os << r.assignment.k << ',' << r.assignment.p << ',' << r.assignment.q << ",\"" << r.assignment.to_string() << "\","
       << r.result.jacobian_rank << ',' << r.result.target << ',' << r.result.is_candidate << ',' << r.listed << ','
       << r.result.modular_agree << '\n';
  return os.str();
}

std::vector<Circulant3Point> circulant3_grid(const std::vector<Rational>& as, const std::vector<Rational>& bs,
                                             const Rational& c, const NestOptions& opt) {
  std::vector<Circulant3Point> out;
  for (const auto& a : as)
    for (const auto& b : bs) out.push_back(nest_circulant3(a, b, c, opt));
  return out;
}

std::string circulant3_csv(const std::vector<Circulant3Point>& pts, const Context& ctx) {
  std::ostringstream os;
  os << ctx.header_comment("#");
  os << "a,b,c,feasible,criterion_value\n";
  for (const auto& p : pts) {
    const std::string feas = p.verdict == NestVerdict::Feasible ? "1" : p.verdict == NestVerdict::Infeasible ? "0" : "stalled";
    os << p.a.get_str() << ',' << p.b.get_str() << ',' << p.c.get_str() << ',' << feas << ',' << p.criterion.get_str()
       << '\n';
  }
  return os.str();
}

std::string circulant4_csv(const std::vector<Circulant4Row>& rows, const Context& ctx) {
  std::ostringstream os;
  os << ctx.header_comment("#");
  os << "a,b,residual_k3,boundary_zero_count\n";
  for (const auto& r : rows)
    os << r.a.get_str() << ',' << r.b.get_str() << ',' << fixed(r.residual_k3, 6) << ',' << r.boundary_zero_count << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psdrank: positive semidefinite rank toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Context ctx;
  app.add_option("-o,--output", ctx.output, "Write the result to this file instead of stdout");
  app.add_option("--format", ctx.format, "Output format where several are supported")
      ->check(CLI::IsMember({"csv", "json", "md", "svg"}));
  app.add_option("--seed", ctx.seed, "Random seed")->capture_default_str();

  NestOptions nest_opt;
  bool drop_zero = false;
  std::string input;

  // classify m32
  auto* classify = app.add_subcommand("classify", "Classify a matrix");
  classify->require_subcommand(1);
  auto* m32 = classify->add_subcommand("m32", "Interior / Boundary / Outside for rank <= 3, psd rank 2");
  m32->add_option("input", input, "Matrix file (CSV or JSON)")->required();
  m32->add_flag("--drop-zero-rows", drop_zero, "Remove zero rows first");
  m32->add_option("--tol", nest_opt.tau_feas, "Feasibility tolerance")->capture_default_str();
  m32->add_option("--max-iter", nest_opt.max_iter, "Newton step budget")->capture_default_str();

  // nest
  bool strict_only = false, report_touching = false;
  auto* nest = app.add_subcommand("nest", "Fit an ellipse between the nested polygons of a rank-3 matrix");
  nest->add_option("input", input, "Matrix file (CSV or JSON)")->required();
  nest->add_option("--tol", nest_opt.tau_feas, "Feasibility tolerance")->capture_default_str();
  nest->add_option("--max-iter", nest_opt.max_iter, "Newton step budget")->capture_default_str();
  nest->add_flag("--strict", strict_only, "Decide strict nesting (verdict drives the exit code)");
  nest->add_flag("--report-touching", report_touching, "Include touched vertices and tangent edges");
  nest->add_flag("--drop-zero-rows", drop_zero, "Remove zero rows first");

  // geometry build
  auto* geometry = app.add_subcommand("geometry", "Nested polytope pair of a matrix");
  geometry->require_subcommand(1);
  auto* geom_build = geometry->add_subcommand("build", "Write the pair (P, Q) as JSON");
  geom_build->add_option("input", input, "Matrix file")->required();
  geom_build->add_flag("--drop-zero-rows", drop_zero, "Remove zero rows first");

  // boundary
  std::string cache_path;
  auto* boundary = app.add_subcommand("boundary", "Boundary polynomial of 3x3 matrices of psd rank two");
  boundary->require_subcommand(1);
  boundary->add_option("--cache", cache_path, "Cache file (default: $PSDRANK_CACHE_DIR or ./.psdrank-cache)");
  auto* b_build = boundary->add_subcommand("build", "Build (or load) the polynomial and report its shape");
  bool rebuild = false;
  b_build->add_flag("--rebuild", rebuild, "Ignore an existing cache");
  auto* b_eval = boundary->add_subcommand("eval", "Evaluate at a 3x3 matrix");
  b_eval->add_option("input", input, "Matrix file")->required();
  auto* b_scan = boundary->add_subcommand("scan", "Evaluate on every 3x3 submatrix");
  b_scan->add_option("input", input, "Matrix file")->required();

  // factorize
  FactorizeOptions fopt;
  auto* factorize = app.add_subcommand("factorize", "Search for a psd factorization of size k");
  factorize->add_option("input", input, "Matrix file")->required();
  factorize->add_option("--k", fopt.k, "Factor size")->required();
  factorize->add_option("--seeds", fopt.seeds, "Random restarts")->capture_default_str();
  factorize->add_option("--iters", fopt.iters, "Sweeps per restart")->capture_default_str();
  factorize->add_option("--tol", fopt.tau_fact, "Residual declaring success")->capture_default_str();
  factorize->add_flag("--drop-zero-rows", drop_zero, "Remove zero rows first");

  // sqrtrank
  std::size_t sqrt_limit = std::size_t{1} << 20;
  auto* sqrtrank = app.add_subcommand("sqrtrank", "Square-root rank by sign enumeration");
  sqrtrank->add_option("input", input, "Matrix file")->required();
  sqrtrank->add_option("--limit", sqrt_limit, "Maximum number of sign patterns")->capture_default_str();

  // scan-circulant3
  std::string amin = "1/20", amax = "5", bmin = "1/20", bmax = "5", step = "1/20", cval = "1";
  auto* scan3 = app.add_subcommand("scan-circulant3", "Ellipse nesting over circulant(a, b, c)");
  scan3->add_option("--amin", amin)->capture_default_str();
  scan3->add_option("--amax", amax)->capture_default_str();
  scan3->add_option("--bmin", bmin)->capture_default_str();
  scan3->add_option("--bmax", bmax)->capture_default_str();
  scan3->add_option("--step", step)->capture_default_str();
  scan3->add_option("--c", cval)->capture_default_str();

  // scan-circulant4
  std::string amin4 = "1/4", amax4 = "3", bmin4 = "1/4", bmax4 = "3", step4 = "1/4";
  FactorizeOptions scan4_opt;
  scan4_opt.seeds = 4;
  scan4_opt.iters = 2000;
  auto* scan4 = app.add_subcommand("scan-circulant4", "Residual of k=3 factorizations over the 4x4 family");
  scan4->add_option("--amin", amin4)->capture_default_str();
  scan4->add_option("--amax", amax4)->capture_default_str();
  scan4->add_option("--bmin", bmin4)->capture_default_str();
  scan4->add_option("--bmax", bmax4)->capture_default_str();
  scan4->add_option("--step", step4)->capture_default_str();
  scan4->add_option("--seeds", scan4_opt.seeds)->capture_default_str();
  scan4->add_option("--iters", scan4_opt.iters)->capture_default_str();

  // spectra
  auto* spectra = app.add_subcommand("spectra", "Spectrahedron constructions");
  spectra->require_subcommand(1);
  auto* s_shrink = spectra->add_subcommand("shrink", "Shrink {sum x_i a_i a_i^T + (1-sum x_i) B >= 0} to rank-one vertices");
  s_shrink->add_option("input", input, "JSON {a_vecs: [[...]], b: [[...]]}")->required();
  std::string inner_path, outer_path;
  SampleOptions sopt;
  auto* s_contain = spectra->add_subcommand("contain", "Sampled containment of one pencil in another");
  s_contain->add_option("--inner", inner_path, "Inner pencil JSON")->required();
  s_contain->add_option("--outer", outer_path, "Outer pencil JSON")->required();
  s_contain->add_option("--samples", sopt.samples)->capture_default_str();
  s_contain->add_option("--burn-in", sopt.burn_in)->capture_default_str();
  s_contain->add_option("--thinning", sopt.thinning)->capture_default_str();
  s_contain->add_option("--tau", sopt.tau)->capture_default_str();
  std::string point_text;
  double rank_tau = 1e-8;
  auto* s_rank = spectra->add_subcommand("ranklocus", "Rank of the pencil at a point");
  s_rank->add_option("input", input, "Pencil JSON")->required();
  s_rank->add_option("--point", point_text, "Comma-separated coordinates")->required();
  s_rank->add_option("--tau", rank_tau)->capture_default_str();

  // probe
  std::size_t pp = 0, qq = 0, kk = 0, kmax = 9;
  std::string aranks, branks;
  bool no_complement = false;
  auto* probe = app.add_subcommand("probe", "Jacobian rank of rank-constrained psd factorizations");
  probe->require_subcommand(0, 1);
  auto add_probe_opts = [&](CLI::App* sub) {
    sub->add_option("--p", pp);
    sub->add_option("--q", qq);
    sub->add_option("--k", kk);
    sub->add_option("--aranks", aranks, "Comma-separated ranks of A_1..A_p");
    sub->add_option("--branks", branks, "Comma-separated ranks of B_1..B_q");
  };
  add_probe_opts(probe);
  auto* p_single = probe->add_subcommand("single", "One rank assignment");
  add_probe_opts(p_single);
  auto* p_table1 = probe->add_subcommand("table1", "All Table 1 assignments plus the p = q = 4 complement");
  p_table1->add_flag("--no-complement", no_complement, "Skip the unlisted p = q = 4 assignments");
  auto* p_square = probe->add_subcommand("square", "p = q = k + 1 with all ranks one");
  p_square->add_option("--kmax", kmax)->capture_default_str();

  // reproduce
  std::string target, outdir = "artifacts";
  auto* reproduce = app.add_subcommand("reproduce", "Regenerate a table or figure with a manifest");
  reproduce->add_option("target", target)
      ->required()
      ->check(CLI::IsMember({"table1", "circulant3-figure", "circulant4-figure", "boundary-poly"}));
  reproduce->add_option("--outdir", outdir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  std::string chain;
  for (const CLI::App* sub = &app; sub;) {
    const auto subs = sub->get_subcommands();
    if (subs.empty()) break;
    sub = subs.front();
    chain += (chain.empty() ? "" : " ") + sub->get_name();
  }
  // Keep only the options of the invoked subcommand chain and its parents.
  std::string dotted = chain;
  std::replace(dotted.begin(), dotted.end(), ' ', '.');
  ctx.config_text = "command=" + chain + "\n";
  std::string hashed = ctx.config_text;
  {
    std::istringstream all(app.config_to_str(true, false));
    std::string line;
    while (std::getline(all, line)) {
      const std::string key = line.substr(0, line.find('='));
      const std::size_t dot = key.rfind('.');
      const std::string owner = dot == std::string::npos ? "" : key.substr(0, dot);
      if (!owner.empty() && !(dotted + ".").starts_with(owner + ".")) continue;
      ctx.config_text += line + "\n";
      // Output locations do not change the computation, so they stay out of the hash.
      if (key != "output" && key != "reproduce.outdir") hashed += line + "\n";
    }
  }
  ctx.config_hash = hex64(fnv1a64(hashed));
  std::cerr << "psdrank " << kVersion << " config " << ctx.config_hash << "\n" << ctx.config_text;

  try {
    if (m32->parsed()) {
      const RationalMatrix m = load_matrix(input, drop_zero);
      const NonnegativeMatrix nm(m);
      const M32Class cls = classify_m32(nm, nest_opt);
      if (ctx.format == "json") ctx.emit_json(Json{{"class", to_string(cls)}, {"rank", exact_rank(m)}});
      else ctx.emit(to_string(cls) + "\n");
      return kOk;
    }

    if (nest->parsed()) {
      const RationalMatrix m = load_matrix(input, drop_zero);
      const NonnegativeMatrix nm(m);
      if (exact_rank(m) != 3) throw Error(ErrorCode::RankMismatch, "ellipse nesting needs a rank-3 matrix");
      const NestedPair pair = build_nested_pair(row_normalize(nm).normalized);
      NestOptions o = nest_opt;
      o.compute_strict = true;
      const NestReport rep = nest_ellipse(pair, o);
      Json j = nest_report_to_json(rep);
      if (!report_touching) {
        j.erase("touched_vertices");
        j.erase("tangent_edges");
      }
      ctx.emit_json(j);
      const bool yes = strict_only ? rep.feasible && rep.strict : rep.feasible;
      return yes ? kOk : kNegative;
    }

    if (geom_build->parsed()) {
      const RationalMatrix m = load_matrix(input, drop_zero);
      const NestedPair pair = build_nested_pair(row_normalize(NonnegativeMatrix(m)).normalized);
      ctx.emit_json(pair_to_json(pair));
      return kOk;
    }

    if (boundary->parsed()) {
      const fs::path path = cache_path.empty() ? default_boundary_cache_path() : fs::path(cache_path);
      if (b_build->parsed()) {
        const auto t0 = std::chrono::steady_clock::now();
        std::optional<SparsePoly> built;
        if (rebuild) {
          built = build_boundary_polynomial();
          write_polynomial_cache(*built, path);
        }
        const SparsePoly& poly = built ? *built : boundary_polynomial(path);
        std::cerr << "build/load took "
                  << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
        Json blocks = Json::array();
        for (std::size_t b = 0; b < 3; ++b) {
          const std::size_t row_block[3] = {3 * b, 3 * b + 1, 3 * b + 2};
          const std::size_t col_block[3] = {b, b + 3, b + 6};
          blocks.push_back(Json{{"row", b + 1},
                                {"row_degree", poly.homogeneous_degree_in(row_block)},
                                {"col", b + 1},
                                {"col_degree", poly.homogeneous_degree_in(col_block)}});
        }
        ctx.emit_json(Json{{"cache", path.string()},
                           {"terms", poly.term_count()},
                           {"total_degree", poly.total_degree()},
                           {"homogeneous", poly.is_homogeneous()},
                           {"blocks", blocks},
                           {"fnv1a64", hex64(fnv1a64(serialize_polynomial(poly)))}});
        return kOk;
      }
      const SparsePoly& poly = boundary_polynomial(path);
      const RationalMatrix m = read_matrix_file(input);
      if (b_eval->parsed()) {
        const Rational v = eval_boundary(poly, m);
        if (ctx.format == "json") ctx.emit_json(Json{{"value", v.get_str()}, {"zero", v == 0}});
        else ctx.emit(v.get_str() + "\n");
        return kOk;
      }
      const BoundaryScanReport rep = boundary_scan(poly, m);
      if (rep.rank_warning) std::cerr << "warning: rank " << rep.rank << " exceeds 3\n";
      if (ctx.format == "csv") {
        std::ostringstream os;
        os << ctx.header_comment("#") << "rows,cols,value\n";
        for (const auto& e : rep.entries)
          os << '"' << e.rows[0] + 1 << ' ' << e.rows[1] + 1 << ' ' << e.rows[2] + 1 << "\",\"" << e.cols[0] + 1 << ' '
             << e.cols[1] + 1 << ' ' << e.cols[2] + 1 << "\"," << e.value.get_str() << '\n';
        ctx.emit(os.str());
      } else {
        Json entries = Json::array();
        for (const auto& e : rep.entries)
          entries.push_back(Json{{"rows", e.rows}, {"cols", e.cols}, {"value", e.value.get_str()}});
        Json zeros = Json::array();
        for (const auto& [i, j] : rep.zero_entries) zeros.push_back(Json{i, j});
        ctx.emit_json(Json{{"rank", rep.rank},
                           {"rank_warning", rep.rank_warning},
                           {"entries", entries},
                           {"zero_submatrices", rep.zero_submatrices},
                           {"zero_entries", zeros},
                           {"min_abs_value", rep.min_abs_value ? Json(rep.min_abs_value->get_str()) : Json(nullptr)}});
      }
      return kOk;
    }

    if (factorize->parsed()) {
      const RationalMatrix m = NonnegativeMatrix(load_matrix(input, drop_zero)).matrix();
      fopt.seed = ctx.seed;
      const FactorizeResult res = alternate_factorize(to_eigen(m), fopt);
      const RankProfile rp = rank_profile(res.best);
      ctx.emit_json(Json{{"k", fopt.k},
                         {"residual", res.best.residual},
                         {"within_tolerance", res.within_tolerance},
                         {"statement", res.within_tolerance ? "psd rank <= k (numerically)"
                                                            : "no factorization found; no lower bound implied"},
                         {"best_seed", res.best_seed},
                         {"monotone", res.monotone},
                         {"a_ranks", rp.a_ranks},
                         {"b_ranks", rp.b_ranks},
                         {"count_rank_one_a", rp.count_rank_one_a},
                         {"count_rank_one_b", rp.count_rank_one_b}});
      return res.within_tolerance ? kOk : kNegative;
    }

    if (sqrtrank->parsed()) {
      const RationalMatrix m = read_matrix_file(input);
      const SqrtRankResult r = sqrt_rank(m, sqrt_limit);
      Json w = Json::array();
      if (r.exact_witness) {
        w = matrix_to_json(*r.exact_witness)["entries"];
      } else {
        for (Eigen::Index i = 0; i < r.witness.rows(); ++i) {
          Json row = Json::array();
          for (Eigen::Index j = 0; j < r.witness.cols(); ++j) row.push_back(r.witness(i, j));
          w.push_back(row);
        }
      }
      ctx.emit_json(Json{{"sqrt_rank", r.rank},
                         {"exact", r.exact},
                         {"guard_triggered", r.guard_triggered},
                         {"patterns", r.patterns},
                         {"witness", w}});
      return kOk;
    }

    if (scan3->parsed()) {
      const auto pts = circulant3_grid(grid(parse_rational(amin), parse_rational(amax), parse_rational(step)),
                                       grid(parse_rational(bmin), parse_rational(bmax), parse_rational(step)),
                                       parse_rational(cval), nest_opt);
      ctx.emit(circulant3_csv(pts, ctx));
      return kOk;
    }

    if (scan4->parsed()) {
      scan4_opt.seed = ctx.seed;
      const auto rows = scan_circulant4(parse_rational(amin4), parse_rational(amax4), parse_rational(bmin4),
                                        parse_rational(bmax4), parse_rational(step4), scan4_opt);
      ctx.emit(circulant4_csv(rows, ctx));
      return kOk;
    }

    if (s_shrink->parsed()) {
      const Json j = read_json_file(input);
      std::vector<Eigen::VectorXd> avecs;
      for (const auto& a : j.at("a_vecs")) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
        for (std::size_t t = 0; t < a.size(); ++t) v[static_cast<Eigen::Index>(t)] = a[t].get<double>();
        avecs.push_back(v);
      }
      const auto& bj = j.at("b");
      Eigen::MatrixXd b(static_cast<Eigen::Index>(bj.size()), static_cast<Eigen::Index>(bj.size()));
      for (std::size_t r = 0; r < bj.size(); ++r)
        for (std::size_t c = 0; c < bj[r].size(); ++c)
          b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = bj[r][c].get<double>();
      const Pencil out = shrink_at_rank_one(avecs, b);
      ctx.emit_json(Json{{"original", pencil_to_json(rank_one_pencil(avecs, b))}, {"shrunk", pencil_to_json(out)}});
      return kOk;
    }

    if (s_contain->parsed()) {
      const Pencil inner = pencil_from_json(read_json_file(inner_path));
      const Pencil outer = pencil_from_json(read_json_file(outer_path));
      sopt.seed = ctx.seed;
      const ContainmentReport rep = containment_sample(inner, outer, sopt);
      Json j{{"samples", rep.samples}, {"violations", rep.violations}, {"worst_scaled_eigenvalue", rep.worst_scaled_eigenvalue}};
      if (rep.first_violation) j["first_violation"] = std::vector<double>(rep.first_violation->data(), rep.first_violation->data() + rep.first_violation->size());
      ctx.emit_json(j);
      return rep.violations == 0 ? kOk : kNegative;
    }

    if (s_rank->parsed()) {
      const Pencil p = pencil_from_json(read_json_file(input));
      std::vector<double> coords;
      std::stringstream ss(point_text);
      std::string tok;
      while (std::getline(ss, tok, ',')) coords.push_back(parse_rational(tok).get_d());
      const Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()));
      const std::size_t r = rank_locus(p, x, rank_tau);
      if (ctx.format == "json") ctx.emit_json(Json{{"rank", r}});
      else ctx.emit(std::to_string(r) + "\n");
      return kOk;
    }

    if (probe->parsed()) {
      if (p_table1->parsed()) {
        const auto rows = table1_sweep(ctx.seed, !no_complement);
        if (ctx.format == "csv") ctx.emit(ctx.header_comment("#") + table1_csv(rows));
        else if (ctx.format == "json") {
          Json arr = Json::array();
          for (const auto& r : rows) {
            Json j = probe_json(r.assignment, r.result);
            j["listed"] = r.listed;
            arr.push_back(j);
          }
          ctx.emit_json(Json{{"rows", arr}});
        } else {
          ctx.emit("<!-- psdrank " + std::string(kVersion) + " config " + ctx.config_hash + " -->\n" + table1_markdown(rows, true));
        }
        bool ok = true;
        for (const auto& r : rows) ok = ok && (!r.listed || r.result.is_candidate) && r.result.modular_agree;
        return ok ? kOk : kNegative;
      }
      if (p_square->parsed()) {
        const auto rows = square_case_sweep(kmax, ctx.seed);
        for (const auto& r : rows) std::cerr << "k=" << r.k << " took " << r.result.seconds << " s\n";
        ctx.emit_json(Json{{"rows", square_sweep_json(rows)}});
        bool ok = true;
        for (const auto& r : rows) ok = ok && r.seed_stable && r.result.modular_agree;
        return ok ? kOk : kNegative;
      }
      if (pp == 0 || qq == 0 || kk == 0 || aranks.empty() || branks.empty())
        throw Error(ErrorCode::ParseError, "probe needs --p --q --k --aranks --branks");
      const RankAssignment a{pp, qq, kk, parse_rank_list(aranks), parse_rank_list(branks)};
      const ProbeResult r = jacobian_rank(a, ctx.seed);
      ctx.emit_json(probe_json(a, r));
      return r.is_candidate ? kOk : kNegative;
    }

    if (reproduce->parsed()) {
      const fs::path dir(outdir);
      fs::create_directories(dir);
      Json manifest{{"target", target}, {"seed", ctx.seed}, {"meta", ctx.meta()}, {"files", Json::array()}};
      auto put = [&](const std::string& name, const std::string& text) {
        Context::write_file(dir / name, text);
        manifest["files"].push_back(name);
      };
      if (target == "table1") {
        const auto rows = table1_sweep(ctx.seed, true);
        put("table1.md", "<!-- psdrank " + std::string(kVersion) + " config " + ctx.config_hash + " -->\n" +
                             table1_markdown(rows, false));
        put("table1_full.csv", ctx.header_comment("#") + table1_csv(rows));
        Json k4 = Json::array();
        for (std::size_t other : {2, 3, 4}) {
          const RankAssignment a = k4_assignment(other);
          k4.push_back(probe_json(a, jacobian_rank(a, ctx.seed)));
        }
        put("k4_probes.json", Json{{"rows", k4}, {"meta", ctx.meta()}}.dump(2) + "\n");
      } else if (target == "circulant3-figure") {
        std::vector<Rational> axis;
        for (int i = 1; i <= 100; ++i) axis.push_back(Rational(i, 20));
        for (auto& x : axis) x.canonicalize();
        const auto pts = circulant3_grid(axis, axis, 1, nest_opt);
        put("circulant3.csv", circulant3_csv(pts, ctx));
        svg::Scatter plot(0, 5, 0, 5);
        plot.set_title("circulant (a, b, 1): ellipse nesting");
        plot.set_labels("a", "b");
        plot.add_comment("psdrank " + std::string(kVersion) + " config " + ctx.config_hash);
        std::size_t agree = 0;
        for (const auto& p : pts) {
          const bool feas = p.verdict == NestVerdict::Feasible;
          if (feas == (p.criterion <= 0) && p.verdict != NestVerdict::Stalled) ++agree;
          plot.add(p.a.get_d(), p.b.get_d(), p.verdict == NestVerdict::Stalled ? "orange" : feas ? "seagreen" : "lightgray");
        }
        put("circulant3.svg", plot.render(1.6));
        manifest["points"] = pts.size();
        manifest["agree_with_criterion"] = agree;
        manifest["tau_feas"] = nest_opt.tau_feas;
      } else if (target == "circulant4-figure") {
        scan4_opt.seed = ctx.seed;
        const auto rows = scan_circulant4(Rational(1, 4), 3, Rational(1, 4), 3, Rational(1, 4), scan4_opt);
        put("circulant4.csv", circulant4_csv(rows, ctx));
        svg::Scatter plot(0, 3, 0, 3);
        plot.set_title("4x4 family: k = 3 factorization residual");
        plot.set_labels("a", "b");
        plot.add_comment("psdrank " + std::string(kVersion) + " config " + ctx.config_hash);
        for (const auto& r : rows)
          plot.add(r.a.get_d(), r.b.get_d(), r.residual_k3 <= scan4_opt.tau_fact ? "seagreen" : "lightgray");
        put("circulant4.svg", plot.render(5));
        manifest["seeds"] = scan4_opt.seeds;
        manifest["iters"] = scan4_opt.iters;
        manifest["tau_fact"] = scan4_opt.tau_fact;
      } else {
        const SparsePoly poly = build_boundary_polynomial();
        put("boundary_m32.poly", ctx.header_comment("#") + serialize_polynomial(poly));
        manifest["terms"] = poly.term_count();
        manifest["total_degree"] = poly.total_degree();
      }
      Context::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
      std::cout << "wrote " << manifest["files"].size() << " files to " << dir.string() << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::SolverStall || e.code() == ErrorCode::BudgetExceeded ? kUndecided : kInputError;
  } catch (const Json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
