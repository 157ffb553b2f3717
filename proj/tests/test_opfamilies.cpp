#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "jmatrix/opfamilies.hpp"
#include "support.hpp"

using namespace jmatrix;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testsupport::poly;

namespace {

using R = Rational;
using FR = Family<Rational>;

std::vector<R> rational_grid() {
  std::vector<R> g;
  for (int k = -6; k <= 6; ++k) g.emplace_back(k, 3);
  return g;
}

/// Every family that has an Al-Salam-Chihara relation, at rational parameters.
std::vector<FR> asc_families() {
  return {FR::jacobi(R(-1, 2), R(-1, 2)), FR::jacobi(R(1, 3), R(5, 2)), FR::jacobi(R(0), R(0)),
          FR::laguerre(R(1, 2)),          FR::laguerre(R(0)),           FR::hermite(),
          FR::bessel(R(2), R(2)),         FR::bessel(R(7, 3), R(-1, 2)), FR::monomial(),
          FR::chebyshev_t()};
}

}  // namespace

TEST_CASE("recurrence coefficients") {
  auto c = recurrence_coeffs(FR::chebyshev_t(), 4);
  CHECK((c.u == R(1, 2) && c.v == R(0) && c.w == R(1, 2)));
  auto h = recurrence_coeffs(FR::hermite(), 5);
  CHECK((h.u == R(1, 2) && h.v == R(0) && h.w == R(5)));
  auto l = recurrence_coeffs(FR::laguerre(R(1, 2)), 3);
  CHECK((l.u == R(-4) && l.v == R(15, 2) && l.w == R(-7, 2)));
  // Legendre: x P_n = (n+1)/(2n+1) P_{n+1} + n/(2n+1) P_{n-1}.
  for (int n = 0; n < 10; ++n) {
    auto j = recurrence_coeffs(FR::jacobi(R(0), R(0)), n);
    CHECK(j.u == R(n + 1, 2 * n + 1));
    CHECK(j.v == R(0));
    CHECK(j.w == R(n, 2 * n + 1));
  }
  auto dh = FR::dual_hahn(R(1, 2), R(0), 3);
  CHECK_NOTHROW(recurrence_coeffs(dh, 2));
  try {
    recurrence_coeffs(dh, 3);
    FAIL("dual Hahn must truncate");
  } catch (const IndexedError& e) {
    CHECK(e.index() == 3);
  }
}

TEST_CASE("closed forms") {
  const Polynomial<R> x{R(0), R(1)};
  auto cheb = FR::chebyshev_t();
  CHECK(family_polynomial(cheb, 0) == poly({1}));
  CHECK(family_polynomial(cheb, 1) == poly({0, 1}));
  CHECK(family_polynomial(cheb, 2) == poly({-1, 0, 2}));
  CHECK(family_polynomial(cheb, 3) == poly({0, -3, 0, 4}));
  CHECK(family_polynomial(cheb, 4) == poly({1, 0, -8, 0, 8}));
  auto lag = FR::laguerre(R(0));
  CHECK(family_polynomial(lag, 1) == poly({1, -1}));
  CHECK(family_polynomial(lag, 2) == Polynomial<R>{R(1), R(-2), R(1, 2)});
  auto her = FR::hermite();
  CHECK(family_polynomial(her, 2) == poly({-2, 0, 4}));
  CHECK(family_polynomial(her, 3) == poly({0, -12, 0, 8}));
  // Bessel y_2(x; 2, 2) = 1 + 3x + 3x^2.
  CHECK(family_polynomial(FR::bessel(R(2), R(2)), 2) == poly({1, 3, 3}));

  CHECK_THAT(eval_family(Family<double>::chebyshev_t(), 3, std::cos(std::numbers::pi / 5)),
             WithinAbs(std::cos(3 * std::numbers::pi / 5), 1e-14));
  CHECK(eval_family(Family<double>::laguerre(0.0), 1, 2.0) == -1.0);
  CHECK(eval_family(FR::monomial(), 4, R(3, 2)) == R(81, 16));
}

TEST_CASE("forward recurrence agrees with the symbolic polynomial") {
  for (const auto& f : asc_families()) {
    for (int n = 0; n <= 8; ++n) {
      auto p = family_polynomial(f, n);
      for (const auto& x : rational_grid()) CHECK(eval_family(f, n, x) == p(x));
    }
  }
}

TEST_CASE("overflow guard") {
  auto H = Family<double>::hermite();
  CHECK_THROWS_AS(eval_family(H, 400, 30.0), Error);
  auto s = eval_family_scaled(H, 400, 30.0);
  CHECK(s.log_abs > 690);
  auto small = eval_family_scaled(H, 10, 0.7);
  CHECK_THAT(small.value(), WithinRel(eval_family(H, 10, 0.7), 1e-12));
}

TEST_CASE("Bochner differential equations") {
  CHECK(bochner_residual(FR::hermite(), 2, rational_grid()) == R(0));
  for (const auto& f : asc_families()) {
    for (int n = 0; n <= 10; ++n) CHECK(bochner_residual(f, n, rational_grid()) == R(0));
  }
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(-1 + k / 10.0);
  for (int n = 0; n <= 10; ++n) CHECK(bochner_residual(Family<double>::jacobi(-0.5, -0.5), n, grid) <= 1e-11);
  CHECK_THROWS_AS(bochner_residual(FR::dual_hahn(R(0), R(0), 2), 1, rational_grid()), Error);
}

TEST_CASE("Al-Salam-Chihara relations") {
  auto h = asc_relation(FR::hermite(), 4);
  CHECK((h.G == poly({1}) && h.A == R(0) && h.B == R(0) && h.C == R(8)));
  auto l = asc_relation(FR::laguerre(R(1, 2)), 3);
  CHECK((l.G == poly({0, 1}) && l.A == R(0) && l.B == R(3) && l.C == R(-7, 2)));
  auto m = asc_relation(FR::monomial(), 5);
  CHECK((m.A == R(0) && m.B == R(5) && m.C == R(0)));
  for (const auto& f : asc_families()) {
    for (int n = 0; n <= 10; ++n) {
      const auto r = asc_relation(f, n);
      const auto lhs = r.G * family_polynomial(f, n).derivative();
      auto rhs = family_polynomial(f, n + 1) * r.A + family_polynomial(f, n) * r.B;
      if (n > 0) rhs += family_polynomial(f, n - 1) * r.C;
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("dual Hahn") {
  SECTION("recurrence matches the explicit sum") {
    auto f = FR::dual_hahn(R(1, 2), R(0), 4);
    for (long x = 0; x <= 4; ++x) {
      for (int n = 0; n <= 4; ++n) {
        CHECK(eval_family(f, n, R(x)) == dual_hahn_explicit(R(1, 2), R(0), 4, n, R(x)));
      }
    }
  }
  SECTION("discrete orthogonality") {
    // Morse parameters (2b - 2N, 0, N - 1) for b = 2.25 and 3.8.
    for (auto [b, N] : {std::pair{R(9, 4), 2L}, std::pair{R(19, 5), 4L}}) {
      const R g = R(2) * b - R(2 * N);
      const long Nk = N - 1;
      auto f = FR::dual_hahn(g, R(0), Nk);
      for (int n = 0; n <= Nk; ++n) {
        for (int m = 0; m <= Nk; ++m) {
          R sum(0);
          for (long x = 0; x <= Nk; ++x) sum += dual_hahn_weight(g, R(0), Nk, x) * eval_family(f, n, R(x)) * eval_family(f, m, R(x));
          CHECK(sum == (n == m ? dual_hahn_norm(g, R(0), Nk, n) : R(0)));
        }
      }
    }
  }
}

TEST_CASE("continuous dual Hahn") {
  const double a = 2.75, b = 0.25, c = 1.75;
  auto f = Family<double>::continuous_dual_hahn(a, b, c);
  for (int n = 0; n <= 8; ++n) {
    for (double x : {0.1, 0.9, 2.3}) CHECK_THAT(eval_family(f, n, x), WithinRel(cdh_direct(a, b, c, n, x), 1e-10));
  }
  for (double g : {0.1, 1.0, 5.0}) CHECK(cdh_weight(2.25, 2, g) > 0);
  CHECK(cdh_weight(2.25, 2, 20.0) / cdh_weight(2.25, 2, 10.0) < 1e-6);
  CHECK_THROWS_AS(cdh_weight(2.25, 2, 0.0), Error);
  auto total = integrate_half_line([](double g) { return cdh_weight(2.25, 2, g); }, 0.0);
  CHECK_THAT(total.value, WithinAbs(1.0, 1e-8));
}

TEST_CASE("parameter domains and parsing") {
  CHECK_THROWS_AS(FR::jacobi(R(-1), R(0)), Error);
  CHECK_THROWS_AS(FR::laguerre(R(-2)), Error);
  CHECK_THROWS_AS(FR::dual_hahn(R(0), R(0), 0), Error);
  CHECK_THROWS_AS(FR::continuous_dual_hahn(R(1), R(0), R(1)), Error);
  CHECK_THROWS_AS(FR::bessel(R(-1), R(2)), Error);
  auto j = parse_family<double>("jacobi:-0.5,-0.5");
  CHECK(j.kind == FamilyKind::Jacobi);
  CHECK(j.p(1) == -0.5);
  auto d = parse_family<Rational>("dualhahn:1/2,0,1");
  CHECK(d.dual_hahn_N() == 1);
  CHECK(parse_family<double>("cdh:2.75,0.25,1.75").spec() == "cdh:2.75,0.25,1.75");
  CHECK(parse_family<double>("hermite").kind == FamilyKind::Hermite);
  CHECK_THROWS_AS(parse_family<double>("wilson:1,2,3,4"), Error);
  CHECK_THROWS_AS(parse_family<double>("laguerre:1,2"), Error);
}

TEST_CASE("Gauss rules from family recurrences") {
  auto legendre = gauss_rule(Family<double>::jacobi(0.0, 0.0), 2);
  CHECK_THAT(legendre.nodes[1], WithinAbs(1 / std::sqrt(3.0), 1e-15));
  CHECK_THAT(legendre.total_mass, WithinRel(2.0, 1e-15));
  auto cheb = gauss_rule(Family<double>::chebyshev_t(), 5);
  CHECK_THAT(cheb.nodes[4], WithinAbs(std::cos(std::numbers::pi / 10), 1e-14));
  auto jac = gauss_rule(Family<double>::jacobi(-0.5, -0.5), 5);
  CHECK_THAT(jac.nodes[4], WithinAbs(std::cos(std::numbers::pi / 10), 1e-14));
  CHECK_THAT(jac.total_mass, WithinRel(std::numbers::pi, 1e-14));
  CHECK_THROWS_AS(gauss_rule(Family<double>::monomial(), 3), Error);
}
