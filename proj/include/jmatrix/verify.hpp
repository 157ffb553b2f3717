#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jmatrix/format.hpp"
#include "jmatrix/jacspec.hpp"
#include "jmatrix/lame.hpp"
#include "jmatrix/morse.hpp"
#include "jmatrix/opfamilies.hpp"
#include "jmatrix/sampling.hpp"
#include "jmatrix/tdop.hpp"

namespace jmatrix::verify {

struct CriterionResult {
  int id = 0;
  std::string key;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string key;
  std::string title;
  std::function<CriterionResult()> run;
};

namespace detail {

/// Collects failures; the first few are kept verbatim in the detail text.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (++failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }
  void note(const std::string& s) { extra_ += (extra_.empty() ? "" : "; ") + s; }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    std::ostringstream os;
    os << checks_ - failures_ << "/" << checks_ << " checks";
    if (!extra_.empty()) os << "; " << extra_;
    if (failures_ > 0) os << "; first failures: " << notes_.str();
    return os.str();
  }

 private:
  long checks_ = 0, failures_ = 0;
  std::ostringstream notes_;
  std::string extra_;
};

inline std::string num(double v) { return format_double(v); }

}  // namespace detail

inline CriterionResult generic_tridiagonalization() {
  detail::Tally t;
  std::mt19937_64 rng(20240601);
  const auto patterns = sampling::strict_patterns();
  long repaired = 0;
  for (int i = 0; i < 200; ++i) {
    const auto L = sampling::random_td(rng, patterns[static_cast<std::size_t>(i) % patterns.size()], i);
    const auto tri = tridiagonalize(L, 25);
    repaired += static_cast<long>(tri.repaired_rows.size());
    for (int n = 0; n <= 24; ++n) {
      t.check(relation_residual(L, tri, n).is_zero(), "operator " + std::to_string(i) + " row " + std::to_string(n));
    }
  }
  t.note("rebuilt rows " + std::to_string(repaired));
  return {1, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult anticommutator() {
  detail::Tally t;
  std::mt19937_64 rng(20240602);
  const auto patterns = sampling::strict_patterns();
  for (int i = 0; i < 50; ++i) {
    const auto L = sampling::random_td(rng, patterns[static_cast<std::size_t>(i) % patterns.size()], i);
    const auto D = reconstruct_D(L, 21);
    for (int n = 0; n <= 20; ++n) {
      const auto xn = Polynomial<Rational>::monomial(n, Rational(1));
      t.check(D(xn.shifted_up(1)) + D(xn).shifted_up(1) == L(xn), "operator " + std::to_string(i) + " n " + std::to_string(n));
    }
  }
  return {2, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult morse_bound_states() {
  detail::Tally t;
  double worst = 0;
  for (double b : {1.2, 2.25, 3.8, 5.7}) {
    const auto m = build_morse_model(b);
    const auto s = bound_states(m);
    const auto want = bound_state_closed_form(m);
    t.check(s.eigenvalues.size() == want.size(), "b " + detail::num(b) + " count");
    for (std::size_t i = 0; i < std::min(want.size(), s.eigenvalues.size()); ++i) {
      const double err = std::abs(s.eigenvalues[i] - want[i]);
      worst = std::max(worst, err);
      t.check(err <= 1e-10, "b " + detail::num(b) + " level " + std::to_string(i));
    }
  }
  t.note("max error " + detail::num(worst));
  return {3, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult morse_operator_identity() {
  detail::Tally t;
  const auto m = build_morse_model(2.25);
  double worst = 0;
  for (long n = 0; n <= 8; ++n) {
    const double r = action_residual(m, n);
    worst = std::max(worst, r);
    t.check(r <= 1e-9, "n " + std::to_string(n));
  }
  t.note("max residual " + detail::num(worst));
  return {4, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult morse_expansion_identity() {
  detail::Tally t;
  long corrected_ok = 0, total = 0;
  for (Rational b : {Rational(6, 5), Rational(9, 4), Rational(29, 10), Rational(19, 5)}) {
    const auto m = build_morse_model(b);
    for (long level = 0; level < m.N; ++level) {
      const auto e = expansion_identity(m, level);
      ++total;
      if (e.shape_residual.is_zero() && e.C_leading == e.C_closed) ++corrected_ok;
      t.check(e.max_residual.is_zero(),
              "b " + b.str() + " level " + std::to_string(level) + " residual " + e.max_residual.str());
    }
  }
  t.note("identity exact with corrected C in " + std::to_string(corrected_ok) + "/" + std::to_string(total) + " cases");
  return {5, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult morse_parseval() {
  detail::Tally t;
  const auto m = build_morse_model(2.25);
  double worst = 0;
  for (long n = 0; n <= 8; ++n) {
    for (long k = n; k <= 8; ++k) {
      double err = 0;
      try {
        err = std::abs(parseval_check(m, n, k).value - (n == k ? 1.0 : 0.0));
      } catch (const Error& e) {
        t.check(false, "n " + std::to_string(n) + " m " + std::to_string(k) + ": " + e.what());
        continue;
      }
      worst = std::max(worst, err);
      t.check(err <= (n == 0 && k == 0 ? 1e-8 : 1e-7), "n " + std::to_string(n) + " m " + std::to_string(k));
    }
  }
  t.note("max deviation " + detail::num(worst));
  return {6, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult lame_tridiagonalization() {
  detail::Tally t;
  const std::vector<LameModel<Rational>> models{
      build_lame_model(Rational(3), Rational(-1), Rational(-2), Rational(2)),
      build_lame_model(Rational(5, 2), Rational(-3, 2), Rational(-1), Rational(3, 2)),
      build_lame_model(Rational(7, 3), Rational(-1, 2), Rational(-11, 6), Rational(-5, 7))};
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (long n = 0; n <= 20; ++n) {
      t.check(tridiag_residual(models[i], n).is_zero(), "model " + std::to_string(i) + " n " + std::to_string(n));
    }
  }
  return {7, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult lame_even_spectra() {
  detail::Tally t;
  double worst_agree = 0, worst_res = 0;
  for (auto e : {std::array<double, 3>{3, -1, -2}, std::array<double, 3>{0.9, -1.1, 0.2}, std::array<double, 3>{0, -2, 2}}) {
    for (int k = 0; k <= 6; ++k) {
      const auto md = build_lame_model(e[0], e[1], e[2], 2.0 * k);
      const std::string tag = "e (" + detail::num(e[0]) + "," + detail::num(e[1]) + "," + detail::num(e[2]) + ") k " + std::to_string(k);
      LameEvenSpectrum s;
      try {
        s = even_spectrum(md);
      } catch (const Error& err) {
        t.check(false, tag + ": " + err.what());
        continue;
      }
      worst_agree = std::max(worst_agree, s.max_disagreement);
      t.check(s.max_disagreement <= 1e-9, tag + " method disagreement");
      t.check(s.eigenvalues.size() == static_cast<std::size_t>(k + 1), tag + " count");
      for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) t.check(s.eigenvalues[i] > s.eigenvalues[i - 1], tag + " simple");
      for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        const double r = even_eigenfunction_residual(s, md, i, {e[2] + 0.5, 0.0, 2.0});
        worst_res = std::max(worst_res, r);
        t.check(r <= 1e-9, tag + " residual " + std::to_string(i));
      }
    }
  }
  t.note("max disagreement " + detail::num(worst_agree) + ", max residual " + detail::num(worst_res));
  return {8, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult lame_asymptotics() {
  detail::Tally t;
  for (auto e : {std::array<double, 3>{3, -1, -2}, std::array<double, 3>{0.9, -1.1, 0.2}, std::array<double, 3>{0, -2, 2}}) {
    const auto md = build_lame_model(e[0], e[1], e[2], 1.5);
    const auto d = selfadjoint_diagnostic(md, 500);
    const std::string tag = "alpha " + detail::num(md.alpha);
    const double rp = std::abs(d.test.fit_plus[0] - d.predicted_plus) / std::abs(d.predicted_plus);
    const double rm = std::abs(d.test.fit_minus[0] - d.predicted_minus) / std::abs(d.predicted_minus);
    t.check(rp <= 1e-3, tag + " plus fit");
    t.check(rm <= 1e-3, tag + " minus fit");
    t.check(d.test.sign != 0, tag + " no bounded branch (fits " + detail::num(d.test.fit_plus[0]) + ", " +
                                  detail::num(d.test.fit_minus[0]) + ")");
    t.note(tag + " sign " + std::to_string(d.test.sign));
  }
  return {9, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult weight_residues() {
  detail::Tally t;
  const auto md = build_lame_model(Rational(3), Rational(-1), Rational(-2), Rational(3, 2));
  const auto lw = weight_log_derivative(transformed_operator(md));
  std::vector<Rational> locs;
  for (const auto& p : lw.poles) {
    locs.push_back(p.location);
    t.check(p.residue == Rational(-1, 2), "Lame residue at " + p.location.str());
  }
  std::sort(locs.begin(), locs.end());
  t.check(locs == std::vector<Rational>{md.alpha, Rational(-1), Rational(1)}, "Lame pole locations");
  t.check(lw.polynomial_part.is_zero(), "Lame polynomial part");

  const Polynomial<Rational> A{Rational(1), Rational(0), Rational(-1)}, B{Rational(0), Rational(-1)};
  const auto cw = weight_log_derivative(differential_td(A, B, Polynomial<Rational>{}, TdCheck::BochnerRelaxed));
  t.check(cw.poles.size() == 2, "Chebyshev pole count");
  for (const auto& p : cw.poles) t.check(p.residue == Rational(-1, 2), "Chebyshev residue at " + p.location.str());
  t.check(cw.polynomial_part.is_zero(), "Chebyshev polynomial part");
  return {10, "", "", t.ok(), t.summary(), 0};
}

inline CriterionResult quadrature_exactness() {
  detail::Tally t;
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  // Moments of |x|^k, which equal the signed moments for even k.
  struct Case {
    std::string name;
    Family<double> f;
    std::function<double(int)> abs_moment;
    bool symmetric;
  };
  const std::vector<Case> cases{
      {"legendre", Family<double>::jacobi(0.0, 0.0), [](int k) { return 2.0 / (k + 1); }, true},
      {"chebyshev", Family<double>::chebyshev_t(),
       [sqrt_pi](int k) { return sqrt_pi * std::exp(std::lgamma(0.5 * (k + 1)) - std::lgamma(0.5 * k + 1)); }, true},
      {"laguerre", Family<double>::laguerre(0.0), [](int k) { return std::exp(std::lgamma(k + 1.0)); }, false},
      {"hermite", Family<double>::hermite(), [](int k) { return std::exp(std::lgamma(0.5 * (k + 1))); }, true}};
  double worst = 0;
  for (const auto& c : cases) {
    for (int n = 1; n <= 20; ++n) {
      const auto rule = gauss_rule(c.f, n);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        const double scale = c.abs_moment(k);
        const double want = (c.symmetric && k % 2 == 1) ? 0.0 : scale;
        const double got = integrate(rule, [k](double x) { return std::pow(x, k); });
        const double rel = std::abs(got - want) / scale;
        worst = std::max(worst, rel);
        t.check(rel <= 1e-12, c.name + " n " + std::to_string(n) + " degree " + std::to_string(k));
      }
    }
  }
  t.note("max relative error " + detail::num(worst));
  return {11, "", "", t.ok(), t.summary(), 0};
}

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "tridiag", "generic tridiagonalization, 200 random operators, n <= 24", generic_tridiagonalization},
      {2, "anticommutator", "(DX + XD) x^n = L x^n, 50 random operators, n <= 20", anticommutator},
      {3, "morse-bound", "Morse bound states against -(b - m - 1/2)^2", morse_bound_states},
      {4, "morse-identity", "Morse tridiagonal action residual, n <= 8", morse_operator_identity},
      {5, "morse-expansion", "Morse expansion identity with the stated constant C", morse_expansion_identity},
      {6, "morse-parseval", "continuous dual Hahn orthonormality, n, m <= 8", morse_parseval},
      {7, "lame-tridiag", "Lame Chebyshev tridiagonalization, n <= 20", lame_tridiagonalization},
      {8, "lame-spectrum", "Lame even spectra, k <= 6", lame_even_spectra},
      {9, "lame-asymptotics", "Lame orthonormal asymptotics and bounded branch", lame_asymptotics},
      {10, "weight", "weight log-derivative residues", weight_residues},
      {11, "quadrature", "Gauss rule exactness, n <= 20", quadrature_exactness},
  };
  return all;
}

inline CriterionResult run(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = c.run();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = c.id;
  r.key = c.key;
  r.title = c.title;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Suite names: "all", a criterion key, or its number.
inline std::vector<const Criterion*> select(const std::string& suite) {
  std::vector<const Criterion*> out;
  for (const auto& c : criteria()) {
    if (suite == "all" || suite == c.key || suite == std::to_string(c.id)) out.push_back(&c);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
  return out;
}

}  // namespace jmatrix::verify
