#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jmatrix/jacspec.hpp"
#include "jmatrix/lame.hpp"
#include "jmatrix/lowering.hpp"
#include "jmatrix/morse.hpp"
#include "jmatrix/opfamilies.hpp"
#include "jmatrix/poly_io.hpp"
#include "jmatrix/report.hpp"
#include "jmatrix/tdop.hpp"
#include "jmatrix/verify.hpp"

using namespace jmatrix;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConsistency = 2;

/// Raised by a pipeline whose own cross-checks failed; the report is still written.
struct ConsistencyFailure {
  Json report;
  std::string message;
};

struct Options {
  std::string mode = "float";
  std::string out = "json";
  std::string path;
  Tolerances tol;

  // tridiag
  std::string A, B, C;
  int n = 6;
  std::string q;
  bool symmetrize_flag = false, weight_flag = false;

  // morse
  std::string b;
  bool levels = false;
  long tridiag_rows = -1;
  long identity_level = -1;
  std::vector<long> parseval;
  std::vector<double> grid;

  // lame
  std::string e, m;
  bool spectrum = false, residuals = false;
  long orthonormal = -1, diagnostic = -1;

  // families, quad
  std::string family;
  int degree = 5;
  std::vector<std::string> xs;
  bool recurrence = false, asc = false;

  // verify
  std::string suite = "all";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double parse_real(const std::string& s) { return parse_double(s); }

// ---------------------------------------------------------------- tridiag

template <class T>
T parse_value(const std::string& s) {
  if constexpr (is_exact_v<T>) {
    return Rational::parse(s);
  } else {
    return parse_real(s);
  }
}

template <class T>
Json run_tridiag(const RunConfig& cfg, const Options& o, std::string& csv_out) {
  Json inputs;
  inputs["A"] = o.A;
  inputs["B"] = o.B;
  inputs["C"] = o.C;
  inputs["n"] = o.n;
  inputs["lowering"] = o.q.empty() ? "d/dx" : "D_q, q = " + o.q;
  auto report = make_report(cfg, inputs);

  auto A = parse_polynomial<T>(o.A), B = parse_polynomial<T>(o.B), C = parse_polynomial<T>(o.C);
  const TdCheck check = o.weight_flag ? TdCheck::BochnerRelaxed : TdCheck::Strict;
  TDOperator<T> L = o.q.empty() ? differential_td(A, B, C, check)
                                : validate_td(A, B, C, q_derivative_op<T>(parse_value<T>(o.q)),
                                              q_second_derivative_op<T>(parse_value<T>(o.q)), check);
  Json results;
  bool consistent = true;
  if (!L.bochner_class) {
    const auto tri = tridiagonalize(L, o.n);
    results["tridiagonalization"] = to_json(tri);
    double worst = 0;
    for (int k = 0; k < tri.rows(); ++k) {
      const auto r = relation_residual(L, tri, k);
      for (const auto& c : r.coeffs()) worst = std::max(worst, std::abs(to_double(c)));
    }
    const double limit = is_exact_v<T> ? 0.0 : cfg.tolerances.residual_tol;
    consistent = worst <= limit && tri.defective_rows.empty();
    results["max_relation_residual"] = to_json(worst);
    if (o.symmetrize_flag) {
      const auto s = symmetrize(tri);
      results["symmetric"] = {{"a", to_json(s.a)}, {"b", to_json(s.b)}, {"basis_norms", to_json(s.basis_norms)}};
    }
    std::vector<std::vector<std::string>> rows;
    for (int k = 0; k < tri.rows(); ++k) {
      const auto i = static_cast<std::size_t>(k);
      rows.push_back({std::to_string(k), scalar_text(tri.An[i]), scalar_text(tri.Bn[i]), scalar_text(tri.Cn[i]),
                      format_polynomial(tri.y[i])});
    }
    csv_out = csv({"n", "A_n", "B_n", "C_n", "y_n"}, rows);
  }
  if (o.weight_flag) {
    const auto ws = weight_log_derivative(L);
    Json poles = Json::array();
    for (const auto& p : ws.poles) poles.push_back({{"location", to_json(p.location)}, {"residue", to_json(p.residue)}});
    results["weight"] = {{"poles", poles},
                         {"polynomial_part", to_json(ws.polynomial_part)},
                         {"interval", {to_json(ws.interval.lo), to_json(ws.interval.hi)}},
                         {"normalization_point", ws.normalization_point}};
  }
  report["results"] = std::move(results);
  if (!consistent) throw ConsistencyFailure{report, "tridiagonal relation check failed"};
  return report;
}

// ---------------------------------------------------------------- morse

Json run_morse(const RunConfig& cfg, const Options& o, std::string& csv_out) {
  Json inputs;
  inputs["b"] = o.b;
  inputs["levels"] = o.levels;
  if (o.tridiag_rows >= 0) inputs["tridiag"] = o.tridiag_rows;
  if (o.identity_level >= 0) inputs["identity"] = o.identity_level;
  if (!o.parseval.empty()) inputs["parseval"] = o.parseval;
  const std::vector<double> grid = o.grid.empty() ? default_morse_grid() : o.grid;
  inputs["grid"] = to_json(grid);
  auto report = make_report(cfg, inputs);

  const double bd = parse_real(o.b);
  const auto m = build_morse_model(bd);
  report["model"] = {{"b", bd}, {"N", m.N}};
  Json results;
  std::vector<std::vector<std::string>> rows;
  bool consistent = true;
  std::string why;

  if (o.levels) {
    const auto s = bound_states(m);
    results["bound_states"] = to_json(s);
    results["closed_form"] = to_json(bound_state_closed_form(m));
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) rows.push_back({"level", std::to_string(i), format_double(s.eigenvalues[i])});
  }
  if (o.tridiag_rows >= 0) {
    const auto t = schrodinger_tridiag(m);
    std::vector<double> a, b;
    for (long n = 0; n < o.tridiag_rows; ++n) {
      a.push_back(t.J.a(n));
      b.push_back(t.J.b(n));
    }
    Json residuals = Json::array();
    double worst = 0;
    for (long n = 0; n < o.tridiag_rows; ++n) {
      const double r = action_residual(m, n, grid);
      worst = std::max(worst, r);
      residuals.push_back(to_json(r));
      rows.push_back({"row", std::to_string(n), format_double(a[static_cast<std::size_t>(n)]),
                      format_double(b[static_cast<std::size_t>(n)]), format_double(r)});
    }
    results["tridiag"] = {{"a", to_json(a)}, {"b", to_json(b)}, {"split", t.split}, {"action_residuals", residuals}};
    if (worst > cfg.tolerances.residual_tol) {
      consistent = false;
      why = "action residual above tolerance";
    }
  }
  if (o.identity_level >= 0) {
    const auto mr = build_morse_model(Rational::parse(o.b));
    const auto e = expansion_identity(mr, o.identity_level);
    results["identity"] = {{"level", o.identity_level},
                           {"C", to_json(e.C)},
                           {"C_leading", to_json(e.C_leading)},
                           {"C_closed", to_json(e.C_closed)},
                           {"lhs", to_json(e.lhs)},
                           {"rhs", to_json(e.rhs)},
                           {"max_residual", to_json(e.max_residual)},
                           {"shape_residual", to_json(e.shape_residual)},
                           {"exact_with_stated_C", e.max_residual.is_zero()}};
    rows.push_back({"identity", std::to_string(o.identity_level), e.C.str(), e.C_closed.str(), e.max_residual.str()});
  }
  if (!o.parseval.empty()) {
    if (o.parseval.size() != 2) throw Error(ErrorCode::InvalidArgument, "--parseval takes two indices");
    const auto r = parseval_check(m, o.parseval[0], o.parseval[1], cfg.tolerances.quad_rtol);
    results["parseval"] = {{"n", o.parseval[0]},
                           {"m", o.parseval[1]},
                           {"value", r.value},
                           {"error_estimate", r.error},
                           {"truncation", to_json(r.truncation)},
                           {"intervals", r.intervals}};
    rows.push_back({"parseval", std::to_string(o.parseval[0]) + ":" + std::to_string(o.parseval[1]), format_double(r.value)});
  }
  csv_out = csv({"kind", "index", "value", "value2", "value3"}, rows);
  report["results"] = std::move(results);
  if (!consistent) throw ConsistencyFailure{report, why};
  return report;
}

// ---------------------------------------------------------------- lame

Json run_lame(const RunConfig& cfg, const Options& o, std::string& csv_out) {
  Json inputs;
  inputs["e"] = o.e;
  inputs["m"] = o.m;
  inputs["spectrum"] = o.spectrum;
  inputs["residuals"] = o.residuals;
  if (o.orthonormal >= 0) inputs["orthonormal"] = o.orthonormal;
  if (o.diagnostic >= 0) inputs["diagnostic"] = o.diagnostic;
  auto report = make_report(cfg, inputs);

  const auto parts = split_list(o.e);
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "--e takes three comma-separated values");
  Json results;
  std::vector<std::vector<std::string>> rows;
  bool consistent = true;
  std::string why;

  if (cfg.mode == Mode::Exact) {
    const auto md = build_lame_model(Rational::parse(parts[0]), Rational::parse(parts[1]), Rational::parse(parts[2]),
                                     Rational::parse(o.m));
    report["model"] = {{"a", to_json(md.a)}, {"b", to_json(md.b)}, {"alpha", to_json(md.alpha)}};
    Json cheb = Json::array();
    for (long n = 0; n <= 6; ++n) {
      const auto row = cheb_tridiag_coeffs(md, n);
      const bool zero = tridiag_residual(md, n).is_zero();
      consistent = consistent && zero;
      cheb.push_back({{"n", n}, {"upper", to_json(row.upper)}, {"diag", to_json(row.diag)}, {"lower", to_json(row.lower)}, {"residual_zero", zero}});
      rows.push_back({"cheb", std::to_string(n), row.upper.str(), row.diag.str(), row.lower.str()});
    }
    results["chebyshev_rows"] = std::move(cheb);
    if (!consistent) why = "Chebyshev row residual is not zero";
  }
  const auto md = build_lame_model(parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]), parse_real(o.m));
  if (cfg.mode != Mode::Exact) report["model"] = {{"a", md.a}, {"b", md.b}, {"alpha", md.alpha}};

  if (o.spectrum || o.residuals) {
    const auto s = even_spectrum(md, cfg.tolerances.residual_tol);
    Json spec;
    spec["k"] = s.k;
    Json mat = Json::array();
    for (const auto& r : s.matrix) mat.push_back(to_json(r));
    spec["matrix"] = std::move(mat);
    spec["eigenvalues"] = to_json(s.eigenvalues);
    spec["root_eigenvalues"] = to_json(s.root_eigenvalues);
    spec["energies"] = to_json(s.energies);
    Json P = Json::array();
    for (const auto& p : s.Pcoeffs) P.push_back(to_json(p));
    spec["P"] = std::move(P);
    spec["symmetrized"] = s.symmetrized;
    spec["max_disagreement"] = s.max_disagreement;
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
      rows.push_back({"eigenvalue", std::to_string(i), format_double(s.eigenvalues[i]), format_double(s.energies[i])});
    }
    if (o.residuals) {
      const std::vector<double> samples{md.e3 + 0.5, 0.0, 2.0};
      spec["residual_samples"] = to_json(samples);
      Json res = Json::array();
      for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        const double r = even_eigenfunction_residual(s, md, i, samples);
        res.push_back(to_json(r));
        if (r > cfg.tolerances.residual_tol) {
          consistent = false;
          why = "eigenfunction residual above tolerance";
        }
        rows.push_back({"residual", std::to_string(i), format_double(r)});
      }
      spec["residuals"] = std::move(res);
    }
    results["even_spectrum"] = std::move(spec);
  }
  if (o.orthonormal >= 0) {
    const auto f = orthonormal_form(md, o.orthonormal);
    results["orthonormal"] = {{"alpha_n", to_json(f.alpha_n)},
                              {"a", to_json(f.a)},
                              {"b", to_json(f.b)},
                              {"row0_asymmetric", f.row0_asymmetric}};
    for (std::size_t n = 0; n < f.a.size(); ++n) {
      rows.push_back({"orthonormal", std::to_string(n), format_double(f.alpha_n[n]), format_double(f.a[n]), format_double(f.b[n])});
    }
  }
  if (o.diagnostic >= 0) {
    const auto d = selfadjoint_diagnostic(md, o.diagnostic);
    results["diagnostic"] = {{"heuristic", BerezanskiiResult::heuristic},
                             {"sign", d.test.sign == 0 ? Json("NONE") : Json(d.test.sign)},
                             {"fit_plus", to_json(std::vector<double>(d.test.fit_plus.begin(), d.test.fit_plus.end()))},
                             {"fit_minus", to_json(std::vector<double>(d.test.fit_minus.begin(), d.test.fit_minus.end()))},
                             {"predicted_plus", d.predicted_plus},
                             {"predicted_minus", d.predicted_minus},
                             {"bounded_plus", d.test.bounded_plus},
                             {"bounded_minus", d.test.bounded_minus}};
    rows.push_back({"diagnostic", std::to_string(d.test.sign), format_double(d.test.fit_plus[0]), format_double(d.test.fit_minus[0])});
  }
  csv_out = csv({"kind", "index", "value", "value2", "value3"}, rows);
  report["results"] = std::move(results);
  if (!consistent) throw ConsistencyFailure{report, why};
  return report;
}

// ---------------------------------------------------------------- families

template <class T>
Json run_families(const RunConfig& cfg, const Options& o, std::string& csv_out) {
  Json inputs;
  inputs["family"] = o.family;
  inputs["n"] = o.degree;
  inputs["x"] = o.xs;
  auto report = make_report(cfg, inputs);
  const auto f = parse_family<T>(o.family);
  Json results;
  results["family"] = f.spec();
  std::vector<std::vector<std::string>> rows;
  if (o.recurrence) {
    Json rec = Json::array();
    for (int k = 0; k <= o.degree; ++k) {
      if (f.kind == FamilyKind::DualHahn && k >= f.dual_hahn_N()) break;
      const auto r = recurrence_coeffs(f, k);
      rec.push_back({{"n", k}, {"u", to_json(r.u)}, {"v", to_json(r.v)}, {"w", to_json(r.w)}});
      rows.push_back({"recurrence", std::to_string(k), scalar_text(r.u), scalar_text(r.v), scalar_text(r.w)});
    }
    results["recurrence"] = std::move(rec);
  }
  if (f.kind != FamilyKind::ContinuousDualHahn) {
    const auto p = family_polynomial(f, o.degree);
    results["polynomial"] = to_json(p);
  }
  Json values = Json::array();
  for (const auto& xs : o.xs) {
    const T x = parse_value<T>(xs);
    const T v = eval_family(f, o.degree, x);
    values.push_back({{"x", to_json(x)}, {"value", to_json(v)}});
    rows.push_back({"value", xs, scalar_text(v)});
  }
  results["values"] = std::move(values);
  if (o.asc) {
    const auto r = asc_relation(f, o.degree);
    results["asc"] = {{"G", to_json(r.G)}, {"A", to_json(r.A)}, {"B", to_json(r.B)}, {"C", to_json(r.C)}};
  }
  csv_out = csv({"kind", "index", "value", "value2", "value3"}, rows);
  report["results"] = std::move(results);
  return report;
}

// ---------------------------------------------------------------- quad

Json run_quad(const RunConfig& cfg, const Options& o, std::string& csv_out) {
  Json inputs;
  inputs["family"] = o.family;
  inputs["n"] = o.degree;
  auto report = make_report(cfg, inputs);
  const auto rule = gauss_rule(parse_family<double>(o.family), o.degree);
  report["results"] = {{"rule", to_json(rule)}};
  csv_out = quadrature_csv(rule);
  return report;
}

// ---------------------------------------------------------------- verify

Json run_verify(const RunConfig& cfg, const Options& o, std::string& csv_out) {
  Json inputs;
  inputs["suite"] = o.suite;
  auto report = make_report(cfg, inputs);
  Json list = Json::array();
  std::vector<std::vector<std::string>> rows;
  bool all = true;
  for (const auto* c : verify::select(o.suite)) {
    const auto r = verify::run(*c);
    all = all && r.pass;
    std::fprintf(stderr, "%s %2d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.key.c_str(), r.detail.c_str());
    list.push_back({{"id", r.id}, {"key", r.key}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    rows.push_back({std::to_string(r.id), r.key, r.pass ? "PASS" : "FAIL"});
  }
  report["results"] = {{"criteria", list}, {"all_pass", all}};
  csv_out = csv({"id", "key", "status"}, rows);
  if (!all) throw ConsistencyFailure{report, "some criteria failed"};
  return report;
}

void emit(const RunConfig& cfg, const Json& report, const std::string& csv_text) {
  const std::string text = cfg.format == OutputFormat::Csv ? csv_text : dump(report);
  if (cfg.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open output file '" + cfg.path + "'");
  f << text;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InternalConsistency:
    case ErrorCode::NotConverged:
    case ErrorCode::NotSimple:
    case ErrorCode::RecurrenceBreakdown:
      return kExitConsistency;
    default:
      return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"J-matrix method: tridiagonalization, Morse and Lame pipelines, orthogonal polynomial families"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--mode", o.mode, "scalar mode: exact or float (JMATRIX_MODE overrides)")->check(CLI::IsMember({"exact", "float", "EXACT", "FLOAT"}));
  app.add_option("--out", o.out, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", o.path, "write to this file instead of stdout");
  app.add_option("--block-tol", o.tol.block_tol, "zero test for off-diagonal entries");
  app.add_option("--quad-rtol", o.tol.quad_rtol, "relative quadrature tolerance");
  app.add_option("--residual-tol", o.tol.residual_tol, "residual tolerance");
  app.fallthrough();

  auto* tri = app.add_subcommand("tridiag", "tridiagonalize L = A T + B S + C");
  tri->add_option("--A", o.A, "coefficients of A, ascending")->required();
  tri->add_option("--B", o.B, "coefficients of B, ascending")->required();
  tri->add_option("--C", o.C, "coefficients of C, ascending")->required();
  tri->add_option("--n", o.n, "number of rows")->check(CLI::PositiveNumber);
  tri->add_option("--q", o.q, "use q-derivatives with this q instead of d/dx");
  tri->add_flag("--symmetrize", o.symmetrize_flag, "also report the symmetric form");
  tri->add_flag("--weight", o.weight_flag, "report the weight log-derivative (accepts Bochner-class operators)");

  auto* morse = app.add_subcommand("morse", "Schrodinger operator with Morse potential");
  morse->add_option("--b", o.b, "potential depth parameter")->required();
  morse->add_flag("--levels", o.levels, "bound-state energies");
  morse->add_option("--tridiag", o.tridiag_rows, "tridiagonal coefficients and action residuals for rows 0..n-1");
  morse->add_option("--identity", o.identity_level, "expansion identity at this level (exact)");
  morse->add_option("--parseval", o.parseval, "orthonormality integral for indices n m")->expected(2);
  morse->add_option("--grid", o.grid, "sample points for residuals")->delimiter(',');

  auto* lame = app.add_subcommand("lame", "Lame operator in algebraic form");
  lame->add_option("--e", o.e, "branch values e1,e2,e3")->required();
  lame->add_option("--m", o.m, "degree parameter")->required();
  lame->add_flag("--spectrum", o.spectrum, "finite spectrum for even m");
  lame->add_flag("--residuals", o.residuals, "eigenfunction residuals");
  lame->add_option("--orthonormal", o.orthonormal, "orthonormal coefficients up to n");
  lame->add_option("--diagnostic", o.diagnostic, "self-adjointness heuristic up to n");

  auto* fam = app.add_subcommand("families", "classical and hypergeometric families");
  fam->add_option("--family", o.family, "family spec, e.g. jacobi:-0.5,-0.5")->required();
  fam->add_option("--n", o.degree, "degree");
  fam->add_option("--x", o.xs, "evaluation points")->delimiter(',');
  fam->add_flag("--recurrence", o.recurrence, "recurrence coefficients up to n");
  fam->add_flag("--asc", o.asc, "Al-Salam-Chihara relation at n");

  auto* quad = app.add_subcommand("quad", "Gauss rule from a family recurrence");
  quad->add_option("--family", o.family, "family spec")->required();
  quad->add_option("--n", o.degree, "number of nodes")->check(CLI::PositiveNumber);

  auto* ver = app.add_subcommand("verify", "acceptance suites");
  ver->add_option("--suite", o.suite, "all, a criterion key or its number");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  RunConfig cfg;
  std::string csv_text;
  try {
    const char* env = std::getenv("JMATRIX_MODE");
    cfg.mode = parse_mode(env && *env ? std::string(env) : o.mode);
    cfg.format = o.out == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    cfg.path = o.path;
    cfg.tolerances = o.tol;
    cfg.tolerances.validate();
    Json report;
    if (tri->parsed()) {
      cfg.command = "tridiag";
      report = cfg.mode == Mode::Exact ? run_tridiag<Rational>(cfg, o, csv_text) : run_tridiag<double>(cfg, o, csv_text);
    } else if (morse->parsed()) {
      cfg.command = "morse";
      report = run_morse(cfg, o, csv_text);
    } else if (lame->parsed()) {
      cfg.command = "lame";
      report = run_lame(cfg, o, csv_text);
    } else if (fam->parsed()) {
      cfg.command = "families";
      report = cfg.mode == Mode::Exact ? run_families<Rational>(cfg, o, csv_text) : run_families<double>(cfg, o, csv_text);
    } else if (quad->parsed()) {
      cfg.command = "quad";
      report = run_quad(cfg, o, csv_text);
    } else {
      cfg.command = "verify";
      report = run_verify(cfg, o, csv_text);
    }
    emit(cfg, report, csv_text);
    return kExitOk;
  } catch (const ConsistencyFailure& f) {
    emit(cfg, f.report, csv_text);
    std::cerr << "consistency failure: " << f.message << "\n";
    return kExitConsistency;
  } catch (const IndexedError& e) {
    std::cerr << "error: " << e.what() << " (index " << e.index() << ")\n";
    return exit_code_for(e.code());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}
