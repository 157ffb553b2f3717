#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "jmatrix/jacspec.hpp"
#include "jmatrix/special.hpp"

using namespace jmatrix;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

JacobiOperator<double> legendre() {
  return {[](long n) { return (n + 1.0) / std::sqrt((2.0 * n + 1) * (2.0 * n + 3)); }, [](long) { return 0.0; }, {}};
}
JacobiOperator<double> chebyshev() {
  return {[](long n) { return n == 0 ? std::sqrt(0.5) : 0.5; }, [](long) { return 0.0; }, {}};
}
JacobiOperator<double> laguerre() {
  return {[](long n) { return n + 1.0; }, [](long n) { return 2.0 * n + 1; }, {}};
}
JacobiOperator<double> hermite() {
  return {[](long n) { return std::sqrt((n + 1.0) / 2); }, [](long) { return 0.0; }, {}};
}

/// Closed-form moments of x^k against each weight.
double legendre_moment(int k) { return k % 2 ? 0.0 : 2.0 / (k + 1); }
double chebyshev_moment(int k) {
  if (k % 2) return 0.0;
  return pi * std::exp(std::lgamma(k + 1.0) - 2 * std::lgamma(k / 2 + 1.0) - k * std::log(2.0));
}
double laguerre_moment(int k) { return std::tgamma(k + 1.0); }
double hermite_moment(int k) { return k % 2 ? 0.0 : std::tgamma((k + 1) / 2.0); }

JacobiOperator<double> random_finite(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<double> a, b;
  for (int i = 0; i < n; ++i) b.push_back(u(rng));
  for (int i = 0; i + 1 < n; ++i) a.push_back(u(rng));
  return JacobiOperator<double>::finite(a, b);
}

}  // namespace

TEST_CASE("special functions against closed forms") {
  for (double y : {0.3, 1.0, 2.5, 7.0}) {
    // |Gamma(iy)|^2 = pi / (y sinh(pi y)), |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
    CHECK_THAT(2 * log_abs_gamma({0.0, y}), WithinAbs(std::log(pi / (y * std::sinh(pi * y))), 1e-12));
    CHECK_THAT(2 * log_abs_gamma({0.5, y}), WithinAbs(std::log(pi / std::cosh(pi * y)), 1e-12));
  }
  for (double x : {0.1, 0.5, 1.0, 3.7, 12.0, 40.5, -0.5, -2.3}) {
    CHECK_THAT(log_abs_gamma({x, 0.0}), WithinAbs(std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))));
  }
  CHECK(pochhammer(Rational(1, 2), 3) == Rational(15, 8));
  CHECK(pochhammer(Rational(-2), 3) == Rational(0));
  CHECK(pochhammer(2.0, 0) == 1.0);
  CHECK(factorial(5) == 120.0);
}

TEST_CASE("split_blocks") {
  SECTION("explicit zero") {
    auto J = JacobiOperator<Rational>{[](long n) { return n == 1 ? Rational(0) : Rational(1); },
                                      [](long) { return Rational(0); }, {}};
    auto d = split_blocks(J, 5);
    REQUIRE(d.blocks.size() == 1);
    CHECK(d.blocks[0] == std::pair<long, long>{0, 1});
    CHECK(d.boundaries == std::vector<long>{-1, 1});
    REQUIRE(d.tail_start);
    CHECK(*d.tail_start == 2);
  }
  SECTION("float tolerance is relative to the diagonal") {
    auto with_coupling = [](double c) {
      return JacobiOperator<double>{[c](long n) { return n == 2 ? c : 1.0; },
                                    [](long n) { return n == 3 ? 1e4 : 0.0; }, {}};
    };
    CHECK(split_blocks(with_coupling(1e-9), 6).blocks.size() == 1);
    CHECK(split_blocks(with_coupling(1e-7), 6).blocks.empty());
    CHECK(split_blocks(with_coupling(1e-7), 6, 1e-10).blocks.size() == 1);
  }
  SECTION("finite operator ends in a block") {
    auto J = JacobiOperator<double>::finite({1, 0, 2}, {0, 0, 0, 0});
    auto d = split_blocks(J, 100);
    REQUIRE(d.blocks.size() == 2);
    CHECK(d.blocks[1] == std::pair<long, long>{2, 3});
    CHECK_FALSE(d.tail_start);
  }
  SECTION("dimensions plus tail cover the scan range") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> zero(40);
      std::bernoulli_distribution coin(0.2);
      for (auto& z : zero) z = coin(rng);
      auto J = JacobiOperator<double>{[zero](long n) { return zero[static_cast<std::size_t>(n)] ? 0.0 : 1.0; },
                                      [](long) { return 0.0; }, {}};
      const long scan = 30;
      auto d = split_blocks(J, scan);
      long covered = 0;
      for (auto [s, e] : d.blocks) covered += e - s + 1;
      if (d.tail_start) covered += scan - *d.tail_start;
      CHECK(covered == scan);
      for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        CHECK(d.blocks[i].second - d.blocks[i].first + 1 == d.boundaries[i + 1] - d.boundaries[i]);
      }
    }
  }
}

TEST_CASE("eig_block") {
  SECTION("1x1") {
    auto J = JacobiOperator<double>::finite({}, {4.5});
    auto s = eig_block(J, {0, 0});
    CHECK(s.eigenvalues == std::vector<double>{4.5});
  }
  SECTION("2x2 characteristic polynomial") {
    auto J = JacobiOperator<double>::finite({std::sqrt(1.5)}, {-2.0625, -1.5625});
    auto s = eig_block(J, {0, 1});
    CHECK_THAT(s.eigenvalues[0], WithinAbs(-3.0625, 1e-13));
    CHECK_THAT(s.eigenvalues[1], WithinAbs(-0.5625, 1e-13));
  }
  SECTION("random blocks against a dense solver") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 8;
      auto J = random_finite(rng, n);
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        M(i, i) = J.b(i);
        if (i + 1 < n) M(i, i + 1) = M(i + 1, i) = J.a(i);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
      auto s = eig_block(J, {0, n - 1});
      for (int i = 0; i < n; ++i) CHECK_THAT(s.eigenvalues[static_cast<std::size_t>(i)], WithinAbs(es.eigenvalues()(i), 1e-11));
      // Orthonormal eigenvectors that satisfy M v = lambda v.
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(s.vectors[static_cast<std::size_t>(i)].data(), n);
        CHECK((M * v - s.eigenvalues[static_cast<std::size_t>(i)] * v).norm() < 1e-10);
        for (int j = 0; j < n; ++j) {
          Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(s.vectors[static_cast<std::size_t>(j)].data(), n);
          CHECK_THAT(v.dot(w), WithinAbs(i == j ? 1.0 : 0.0, 1e-10));
        }
      }
      // Sign flips of the off-diagonal are similarities.
      std::vector<double> a, b;
      for (int i = 0; i < n; ++i) b.push_back(J.b(i));
      for (int i = 0; i + 1 < n; ++i) a.push_back(i % 3 == 0 ? -J.a(i) : J.a(i));
      auto flipped = eig_block(JacobiOperator<double>::finite(a, b), {0, n - 1});
      for (int i = 0; i < n; ++i) {
        CHECK_THAT(flipped.eigenvalues[static_cast<std::size_t>(i)],
                   WithinAbs(s.eigenvalues[static_cast<std::size_t>(i)], 1e-11));
      }
    }
  }
  SECTION("degenerate input") {
    auto J = JacobiOperator<double>::finite({0.0}, {1.0, 1.0});
    CHECK_THROWS_AS(eig_block(J, {0, 1}), Error);
    CHECK_THROWS_AS(eig_block(J, {1, 3}), Error);
  }
}

TEST_CASE("eval_pn") {
  auto J = legendre();
  auto p = eval_pn(J, 0.3, 5);
  CHECK(p[0] == 1.0);
  CHECK_THAT(p[1], WithinRel((0.3 - 0.0) / J.a(0), 1e-15));
  // Orthonormal Legendre: p_n = sqrt(2n+1) P_n.
  CHECK_THAT(p[2], WithinRel(std::sqrt(5.0) * (3 * 0.09 - 1) / 2, 1e-13));

  SECTION("vanishes at block eigenvalues") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      auto F = random_finite(rng, 6);
      auto s = eig_block(F, {0, 5});
      auto ext = JacobiOperator<double>{[F](long n) { return n < 5 ? F.a(n) : 1.0; }, F.b, {}};
      for (double lam : s.eigenvalues) {
        auto v = eval_pn(ext, lam, 6);
        double scale = 0;
        for (double x : v) scale = std::max(scale, std::abs(x));
        CHECK(std::abs(v[6]) <= 1e-9 * scale);
      }
    }
  }
  SECTION("log variant matches") {
    for (double z : {-0.9, 0.1, 0.77}) {
      auto plain = eval_pn(J, z, 60);
      auto logged = eval_pn_log(J, z, 60);
      for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK_THAT(logged[i].value(), WithinRel(plain[i], 1e-10) || WithinAbs(plain[i], 1e-13));
      }
    }
    auto big = eval_pn_log(hermite(), 40.0, 2000);
    CHECK(std::isfinite(big.back().log_abs));
    CHECK(big.back().log_abs > 710);
  }
  SECTION("breakdown") {
    auto B = JacobiOperator<double>{[](long n) { return n == 3 ? 0.0 : 1.0; }, [](long) { return 0.0; }, {}};
    try {
      eval_pn(B, 0.0, 10);
      FAIL("expected breakdown");
    } catch (const IndexedError& e) {
      CHECK(e.code() == ErrorCode::RecurrenceBreakdown);
      CHECK(e.index() == 3);
    }
  }
}

TEST_CASE("golub_welsch examples") {
  auto r = golub_welsch(legendre(), 2, 2.0);
  CHECK_THAT(r.nodes[0], WithinAbs(-1 / std::sqrt(3.0), 1e-15));
  CHECK_THAT(r.nodes[1], WithinAbs(1 / std::sqrt(3.0), 1e-15));
  CHECK_THAT(r.weights[0], WithinAbs(1.0, 1e-14));
  CHECK_THAT(integrate(r, [](double x) { return x * x; }), WithinAbs(2.0 / 3, 1e-15));

  auto c = golub_welsch(chebyshev(), 3, pi);
  for (int k = 1; k <= 3; ++k) {
    CHECK_THAT(c.nodes[static_cast<std::size_t>(3 - k)], WithinAbs(std::cos(pi * (2 * k - 1) / 6), 1e-14));
  }
  auto c6 = golub_welsch(chebyshev(), 6, pi);
  auto T = [](int n, double x) { return std::cos(n * std::acos(x)); };
  CHECK_THAT(integrate(c6, [&](double x) { return T(2, x) * T(3, x); }), WithinAbs(0.0, 1e-12));

  CHECK_THROWS_AS(golub_welsch(legendre(), 0, 2.0), Error);
  auto neg = JacobiOperator<double>{[](long) { return -1.0; }, [](long) { return 0.0; }, {}};
  CHECK_THROWS_AS(golub_welsch(neg, 3, 1.0), Error);
}

TEST_CASE("Gauss exactness up to degree 2n-1") {
  struct Case {
    JacobiOperator<double> J;
    double mass;
    double (*moment)(int);
  };
  std::vector<Case> cases{{legendre(), 2.0, legendre_moment},
                          {chebyshev(), pi, chebyshev_moment},
                          {laguerre(), 1.0, laguerre_moment},
                          {hermite(), std::sqrt(pi), hermite_moment}};
  for (const auto& c : cases) {
    for (int n = 1; n <= 20; ++n) {
      auto r = golub_welsch(c.J, n, c.mass);
      double total = 0;
      for (double w : r.weights) {
        CHECK(w > 0);
        total += w;
      }
      CHECK_THAT(total, WithinRel(c.mass, 1e-12));
      for (int k = 0; k <= 2 * n - 1; ++k) {
        const double got = integrate(r, [k](double x) { return std::pow(x, k); });
        const double want = c.moment(k);
        // Odd moments vanish; compare against the size of the even neighbour.
        const double scale = want != 0 ? std::abs(want) : std::abs(c.moment(k + 1));
        CHECK(std::abs(got - want) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("adaptive and half-line integration") {
  auto r = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
  CHECK_THAT(r.value, WithinRel(std::exp(1.0) - 1, 1e-13));
  auto s = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-11);
  CHECK_THAT(s.value, WithinRel(2.0 / 3, 1e-11));
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1 / x; }, 0.0, 1.0, 1e-12, 1e-300, 50), Error);

  auto g = integrate_half_line([](double x) { return std::exp(-x * x); }, 0.0);
  CHECK_THAT(g.value, WithinRel(std::sqrt(pi) / 2, 1e-10));
  CHECK(std::isfinite(g.truncation));
  // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y) integrates to pi / 2 over (0, inf).
  auto c = integrate_half_line([](double y) { return std::exp(2 * log_abs_gamma({0.5, y})); }, 0.0);
  CHECK_THAT(c.value, WithinRel(pi / 2, 1e-10));
  HalfLineOptions cut;
  cut.truncation = 2.0;
  CHECK_THROWS_AS(integrate_half_line([](double x) { return std::exp(-x); }, 0.0, cut), Error);
}

TEST_CASE("quadrature inner product") {
  auto ip = quadrature_inner_product(golub_welsch(legendre(), 10, 2.0));
  Polynomial<double> one{1.0}, x{0.0, 1.0};
  CHECK_THAT(ip(x, x), WithinAbs(2.0 / 3, 1e-14));
  CHECK_THAT(ip(one, x), WithinAbs(0.0, 1e-14));
}

TEST_CASE("berezanskii heuristic") {
  SECTION("bounded coefficients") {
    auto J = JacobiOperator<double>{[](long) { return 1.0; }, [](long n) { return std::sin(n); }, {}};
    auto res = berezanskii_test(J, 200);
    CHECK(res.sign != 0);
    CHECK(BerezanskiiResult::heuristic);
  }
  SECTION("one growing branch") {
    // s^+ ~ 3n^2, s^- ~ -n^2
    auto J = JacobiOperator<double>{[](long n) { return 0.5 * n * n; }, [](long n) { return 2.0 * n * n; }, {}};
    auto res = berezanskii_test(J, 300);
    CHECK(res.sign == -1);
    CHECK_THAT(res.fit_minus[0], WithinRel(-1.0, 1e-2));
    CHECK_THAT(res.fit_plus[0], WithinRel(3.0, 1e-2));
  }
  SECTION("both branches grow") {
    auto J = JacobiOperator<double>{[](long n) { return 1.0 * n * n; }, [](long n) { return 0.5 * n * n; }, {}};
    CHECK(berezanskii_test(J, 300).sign == 0);
  }
}
