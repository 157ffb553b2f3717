#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "jmatrix/lame.hpp"

using namespace jmatrix;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

using R = Rational;

namespace {

LameModel<R> exact_model(long m) { return build_lame_model(R(3), R(-1), R(-2), R(m)); }

}  // namespace

TEST_CASE("build_lame_model") {
  auto md = exact_model(2);
  CHECK(md.a == R(2));
  CHECK(md.b == R(1));
  CHECK(md.alpha == R(-3, 2));
  CHECK(build_lame_model(R(1), R(-1), R(0), R(3)).alpha == R(0));
  CHECK(build_lame_model(1.0, -1.0, 0.0, 3.0).alpha == 0.0);
  // alpha = +-1 forces a repeated branch value: (2, -1, -1) has alpha = -1.
  CHECK(R(3) * R(-1) / (R(2) - R(-1)) == R(-1));
  CHECK_THROWS_AS(build_lame_model(R(2), R(-1), R(-1), R(2)), Error);
  CHECK_THROWS_AS(build_lame_model(R(-1), R(2), R(-1), R(2)), Error);
  CHECK_THROWS_AS(build_lame_model(R(1), R(1), R(-2), R(2)), Error);
  CHECK_THROWS_AS(build_lame_model(R(1), R(2), R(3), R(2)), Error);
  CHECK_THROWS_AS(build_lame_model(1.0, 2.0, -3.0 + 1e-9, 2.0), Error);
  CHECK_NOTHROW(build_lame_model(1.0, 2.0, -3.0 + 1e-14, 2.0));
}

TEST_CASE("Lame operators") {
  auto md = exact_model(2);
  auto L = algebraic_operator(md);
  CHECK(L.A.degree() == 3);
  CHECK(L.A.leading() == R(1));
  CHECK(L.B.degree() == 2);
  CHECK(L.B * R(2) == L.A.derivative());
  CHECK(L.C == Polynomial<R>{R(0), R(-3, 2)});
  auto Lt = transformed_operator(md);
  const auto Y = Polynomial<R>{R(0), R(1)};
  CHECK(Lt.A == (Y - Polynomial<R>{R(1)}) * (Y + Polynomial<R>{R(1)}) * (Y + Polynomial<R>{R(3, 2)}));
  // L_x f = a (L_y g) with f(x) = g((x - b)/a).
  for (int n = 0; n <= 5; ++n) {
    Polynomial<R> g = Polynomial<R>{R(1)};
    for (int j = 0; j < n; ++j) g = g * (Y + Polynomial<R>{R(j + 1, 3)});
    auto f = shift_affine(g, R(1) / md.a, -md.b / md.a);
    CHECK(L(f) == shift_affine(Lt(g), R(1) / md.a, -md.b / md.a) * md.a);
  }
}

TEST_CASE("Chebyshev rows") {
  auto md = exact_model(2);
  auto r1 = cheb_tridiag_coeffs(md, 1);
  CHECK(r1.upper == R(0));
  CHECK(r1.diag == R(3, 4));
  CHECK(r1.lower == R(-1, 2));
  auto r0 = cheb_tridiag_coeffs(md, 0);
  CHECK(r0.upper == R(-3, 2));
  CHECK(r0.diag == R(-3, 4));
  CHECK(r0.lower == R(0));
  for (long n = 0; n <= 6; ++n) CHECK(tridiag_residual(md, n).is_zero());

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  int tested = 0;
  while (tested < 8) {
    const R e1(num(rng), den(rng)), e2(num(rng), den(rng)), m(num(rng), den(rng));
    LameModel<R> rm;
    try {
      rm = build_lame_model(e1, e2, -e1 - e2, m);
    } catch (const Error&) {
      continue;
    }
    ++tested;
    for (long n = 0; n <= 20; ++n) CHECK(tridiag_residual(rm, n).is_zero());
    // m <-> -m-1
    auto mirror = build_lame_model(rm.e1, rm.e2, rm.e3, -rm.m - R(1));
    for (long n = 0; n <= 10; ++n) {
      auto p = cheb_tridiag_coeffs(rm, n), q = cheb_tridiag_coeffs(mirror, n);
      CHECK((p.upper == q.upper && p.diag == q.diag && p.lower == q.lower));
    }
  }
  // The general formula at n = 0 differs from the actual row.
  const R m(2);
  CHECK((R(0) - m) * (m + R(1)) / R(8) != r0.upper);
}

TEST_CASE("even spectrum") {
  SECTION("k = 0") {
    auto s = even_spectrum(exact_model(0));
    REQUIRE(s.eigenvalues.size() == 1);
    CHECK(s.eigenvalues[0] == 0.0);
    CHECK(even_eigenfunction_residual(s, exact_model(0), 0, {0.0, 1.0}) == 0.0);
  }
  SECTION("m = 2, (3, -1, -2)") {
    auto md = exact_model(2);
    auto s = even_spectrum(md);
    CHECK(s.matrix == std::vector<std::vector<double>>{{-0.75, -0.5}, {-1.5, 0.75}});
    REQUIRE(s.eigenvalues.size() == 2);
    // trace 0, det -0.5625 - 0.75
    CHECK_THAT(s.eigenvalues[0], WithinAbs(-std::sqrt(1.3125), 1e-14));
    CHECK_THAT(s.eigenvalues[1], WithinAbs(std::sqrt(1.3125), 1e-14));
    CHECK(s.symmetrized);
    CHECK_THAT(s.energies[1], WithinAbs(8 * std::sqrt(1.3125), 1e-13));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(even_eigenfunction_residual(s, md, i, {to_double(md.e3) + 0.5, 0.0, 2.0}) <= 1e-10);
    }
    // Independent oracle: L_y psi = lambda psi for psi = P_0 T_0 + P_1 T_1.
    auto Lt = transformed_operator(build_lame_model(3.0, -1.0, -2.0, 2.0));
    for (std::size_t i = 0; i < 2; ++i) {
      const Polynomial<double> psi{s.Pcoeffs[i][0], s.Pcoeffs[i][1]};
      auto r = Lt(psi) - psi * s.eigenvalues[i];
      for (double c : r.coeffs()) CHECK(std::abs(c) <= 1e-13);
    }
  }
  SECTION("agreement and residuals across models") {
    for (auto e : {std::array<double, 3>{3, -1, -2}, std::array<double, 3>{0.9, -1.1, 0.2}, std::array<double, 3>{0, -2, 2}}) {
      for (int k = 0; k <= 6; ++k) {
        auto md = build_lame_model(e[0], e[1], e[2], 2.0 * k);
        auto s = even_spectrum(md);
        REQUIRE(s.eigenvalues.size() == static_cast<std::size_t>(k + 1));
        CHECK(s.max_disagreement <= 1e-9 * std::max(1.0, std::abs(s.eigenvalues.back())));
        // Dense non-symmetric oracle.
        Eigen::MatrixXd M(k + 1, k + 1);
        for (int i = 0; i <= k; ++i) {
          for (int j = 0; j <= k; ++j) M(i, j) = s.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(M);
        std::vector<double> ev;
        for (int i = 0; i <= k; ++i) ev.push_back(es.eigenvalues()(i).real());
        std::sort(ev.begin(), ev.end());
        for (int i = 0; i <= k; ++i) CHECK_THAT(s.eigenvalues[static_cast<std::size_t>(i)], WithinAbs(ev[static_cast<std::size_t>(i)], 1e-8));
        for (int i = 1; i <= k; ++i) CHECK(s.eigenvalues[static_cast<std::size_t>(i)] > s.eigenvalues[static_cast<std::size_t>(i - 1)]);
        if (k <= 4) {
          for (std::size_t i = 0; i <= static_cast<std::size_t>(k); ++i) {
            CHECK(even_eigenfunction_residual(s, md, i, {e[2] + 0.5, 0.0, 2.0}) <= 1e-9);
          }
        }
      }
    }
  }
  SECTION("rejections") {
    CHECK_THROWS_AS(even_spectrum(exact_model(3)), Error);
    CHECK_THROWS_AS(even_spectrum(build_lame_model(3.0, -1.0, -2.0, 2.5)), Error);
    CHECK_THROWS_AS(even_spectrum(exact_model(-2)), Error);
  }
}

TEST_CASE("orthonormal form") {
  auto md = build_lame_model(3.0, -1.0, -2.0, 1.5);
  auto f = orthonormal_form(md, 200);
  CHECK(f.alpha_n[0] == 1.0);
  CHECK_THAT(f.alpha_n[1], WithinRel(std::sqrt(7.0 / 15.0), 1e-14));
  CHECK_THAT(f.a[0], WithinRel(0.5 * std::sqrt(1.75 * 0.25 * 0.75 * 1.25), 1e-14));
  CHECK_THAT(f.a[0], WithinAbs(0.3202, 1e-4));
  CHECK(f.row0_asymmetric);
  CHECK_THROWS_AS(orthonormal_form(build_lame_model(3.0, -1.0, -2.0, 2.5), 10), Error);
  CHECK_THROWS_AS(orthonormal_form(build_lame_model(3.0, -1.0, -2.0, 0.5), 10), Error);
  for (double m : {1.5, 3.3, 5.7}) {
    auto g = orthonormal_form(build_lame_model(3.0, -1.0, -2.0, m), 200);
    for (double v : g.a) CHECK(v > 0);
    for (double v : g.alpha_n) CHECK(v > 0);
  }
  SECTION("T_n = alpha_n p_n turns the Chebyshev rows into the symmetric form") {
    for (double m : {1.5, 3.3}) {
      auto mm = build_lame_model(0.9, -1.1, 0.2, m);
      auto g = orthonormal_form(mm, 30);
      for (long n = 1; n < 30; ++n) {
        auto row = cheb_tridiag_coeffs(mm, n);
        const auto u = static_cast<std::size_t>(n);
        // L p_n = (U_n alpha_{n+1}/alpha_n) p_{n+1} + D_n p_n + (W_n alpha_{n-1}/alpha_n) p_{n-1},
        // equal to a_n, a_{n-1} up to a sign flip of the basis.
        CHECK_THAT(std::abs(row.upper * g.alpha_n[u + 1] / g.alpha_n[u]), WithinRel(g.a[u], 1e-12));
        CHECK_THAT(std::abs(row.lower * g.alpha_n[u - 1] / g.alpha_n[u]), WithinRel(g.a[u - 1], 1e-12));
        CHECK(row.upper * cheb_tridiag_coeffs(mm, n + 1).lower > 0);
        CHECK_THAT(row.diag, WithinRel(g.b[u], 1e-12));
      }
      auto row0 = cheb_tridiag_coeffs(mm, 0);
      CHECK_THAT(std::abs(row0.upper * g.alpha_n[1]), WithinRel(2 * g.a[0], 1e-12));
    }
  }
  SECTION("a_n asymptotics") {
    for (double m : {1.5, 3.3}) {
      auto g = orthonormal_form(build_lame_model(3.0, -1.0, -2.0, m), 500);
      // (a_n / (n^2/2) - 1) n -> 1
      Eigen::MatrixXd X(401, 2);
      Eigen::VectorXd y(401);
      for (long n = 100; n <= 500; ++n) {
        const double r = g.a[static_cast<std::size_t>(n)] / (0.5 * n * n) - 1;
        X(n - 100, 0) = 1.0 / n;
        X(n - 100, 1) = 1.0 / (double(n) * n);
        y(n - 100) = r;
      }
      Eigen::Vector2d c = X.colPivHouseholderQr().solve(y);
      CHECK_THAT(c(0), WithinAbs(1.0, 1e-3));
      CHECK_THAT(c(1), WithinAbs(0.25 * (0.5 - m * (m + 1)), 1e-2));
    }
  }
}

TEST_CASE("self-adjointness diagnostic") {
  auto d = selfadjoint_diagnostic(build_lame_model(3.0, -1.0, -2.0, 1.5), 500);
  CHECK(d.predicted_minus == -0.5);
  CHECK(d.test.bounded_minus);
  CHECK_FALSE(d.test.bounded_plus);
  CHECK(d.test.sign == -1);
  CHECK_THAT(d.test.fit_minus[0], WithinAbs(-0.5, 1e-3));
  CHECK_THAT(d.test.fit_plus[0], WithinAbs(2.5, 1e-3));

  auto d3 = selfadjoint_diagnostic(build_lame_model(0.0, -2.0, 2.0, 1.5), 500);
  CHECK(d3.predicted_plus == -2.0);
  CHECK(d3.test.bounded_plus);
  CHECK(d3.test.sign == +1);

  // |alpha| < 1: both leading coefficients are positive, neither branch is bounded.
  auto d0 = selfadjoint_diagnostic(build_lame_model(0.9, -1.1, 0.2, 1.5), 500);
  CHECK_THAT(d0.test.fit_plus[0], WithinAbs(0.7, 1e-3));
  CHECK_THAT(d0.test.fit_minus[0], WithinAbs(1.3, 1e-3));
  CHECK(d0.test.sign == 0);
}

TEST_CASE("Lame weight") {
  auto md = build_lame_model(R(3), R(-1), R(-2), R(3, 2));
  auto ws = weight_log_derivative(transformed_operator(md));
  REQUIRE(ws.poles.size() == 3);
  for (const auto& p : ws.poles) CHECK(p.residue == R(-1, 2));
  std::vector<R> locs;
  for (const auto& p : ws.poles) locs.push_back(p.location);
  std::sort(locs.begin(), locs.end());
  CHECK(locs == std::vector<R>{R(-3, 2), R(-1), R(1)});
  CHECK(ws.polynomial_part.is_zero());

  auto wd = weight_log_derivative(transformed_operator(build_lame_model(3.0, -1.0, -2.0, 1.5)),
                                  Interval{1.0, std::numeric_limits<double>::infinity()});
  double ratio0 = 0;
  bool first = true;
  for (double y : {1.5, 2.0, 3.7, 10.0}) {
    const double w = eval_weight(wd, y);
    const double want = 1 / std::sqrt((y * y - 1) * (y + 1.5));
    if (first) {
      ratio0 = w / want;
      first = false;
    }
    CHECK_THAT(w / want, WithinRel(ratio0, 1e-10));
  }
}
