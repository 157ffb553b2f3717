#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "jmatrix/error.hpp"
#include "jmatrix/jacspec.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/rational.hpp"
#include "jmatrix/special.hpp"
#include "jmatrix/tdop.hpp"

namespace jmatrix {

enum class FamilyKind { Jacobi, Laguerre, Hermite, Bessel, Monomial, ChebyshevT, DualHahn, ContinuousDualHahn };

inline std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Jacobi: return "jacobi";
    case FamilyKind::Laguerre: return "laguerre";
    case FamilyKind::Hermite: return "hermite";
    case FamilyKind::Bessel: return "bessel";
    case FamilyKind::Monomial: return "monomial";
    case FamilyKind::ChebyshevT: return "chebyshev";
    case FamilyKind::DualHahn: return "dualhahn";
    case FamilyKind::ContinuousDualHahn: return "cdh";
  }
  return "?";
}

/// A classical family with its parameters in Koekoek-Swarttouw normalization.
///
/// Parameters: Jacobi (alpha, beta), Laguerre (alpha), Bessel (a, b) for
/// y_n(x; a, b), dual Hahn (gamma, delta, N) with support x = 0..N, continuous
/// dual Hahn (a, b, c). The recurrence variable is sigma(x): x for the
/// Bochner families, x(x + gamma + delta + 1) for dual Hahn, x^2 for
/// continuous dual Hahn.
template <class T>
struct Family {
  FamilyKind kind;
  std::vector<T> params;

  static Family jacobi(T alpha, T beta) { return make(FamilyKind::Jacobi, {alpha, beta}); }
  static Family laguerre(T alpha) { return make(FamilyKind::Laguerre, {alpha}); }
  static Family hermite() { return make(FamilyKind::Hermite, {}); }
  static Family bessel(T a, T b) { return make(FamilyKind::Bessel, {a, b}); }
  static Family monomial() { return make(FamilyKind::Monomial, {}); }
  static Family chebyshev_t() { return make(FamilyKind::ChebyshevT, {}); }
  static Family dual_hahn(T gamma, T delta, long N) { return make(FamilyKind::DualHahn, {gamma, delta, T(N)}); }
  static Family continuous_dual_hahn(T a, T b, T c) { return make(FamilyKind::ContinuousDualHahn, {a, b, c}); }

  static Family make(FamilyKind kind, std::vector<T> params) {
    Family f{kind, std::move(params)};
    f.validate();
    return f;
  }

  const T& p(std::size_t i) const { return params.at(i); }
  long dual_hahn_N() const { return static_cast<long>(std::llround(to_double(p(2)))); }

  bool bochner() const { return kind != FamilyKind::DualHahn && kind != FamilyKind::ContinuousDualHahn; }

  std::string spec() const {
    std::string s(to_string(kind));
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? "," : ":") + scalar_string(params[i]);
    return s;
  }

  void validate() const {
    auto need = [&](std::size_t n) {
      if (params.size() != n) {
        throw Error(ErrorCode::InvalidArgument, std::string(to_string(kind)) + " takes " + std::to_string(n) + " parameters");
      }
    };
    auto above = [&](const T& v, long bound, const char* what) {
      if (!(v > T(bound))) throw Error(ErrorCode::OutOfDomain, std::string(what) + " must exceed " + std::to_string(bound));
    };
    switch (kind) {
      case FamilyKind::Jacobi:
        need(2);
        above(p(0), -1, "Jacobi alpha");
        above(p(1), -1, "Jacobi beta");
        break;
      case FamilyKind::Laguerre:
        need(1);
        above(p(0), -1, "Laguerre alpha");
        break;
      case FamilyKind::Bessel: {
        need(2);
        if (is_zero(p(1))) throw Error(ErrorCode::OutOfDomain, "Bessel b must be nonzero");
        const double a = to_double(p(0));
        if (a <= 0 && a == std::floor(a)) throw Error(ErrorCode::OutOfDomain, "Bessel a must not be a non-positive integer");
        break;
      }
      case FamilyKind::DualHahn: {
        need(3);
        above(p(0), -1, "dual Hahn gamma");
        above(p(1), -1, "dual Hahn delta");
        const double N = to_double(p(2));
        if (N < 1 || N != std::floor(N)) throw Error(ErrorCode::OutOfDomain, "dual Hahn N must be a positive integer");
        break;
      }
      case FamilyKind::ContinuousDualHahn:
        need(3);
        for (std::size_t i = 0; i < 3; ++i) above(p(i), 0, "continuous dual Hahn parameter");
        break;
      default:
        need(0);
    }
  }

 private:
  static std::string scalar_string(const T& v) {
    if constexpr (is_exact_v<T>) {
      return v.str();
    } else {
      return format_double(v);
    }
  }
};

/// Parse "jacobi:-0.5,-0.5", "laguerre:0.5", "hermite", "dualhahn:0.5,0,1", ...
template <class T>
Family<T> parse_family(std::string_view text) {
  const auto colon = text.find(':');
  const std::string name(text.substr(0, colon));
  std::vector<T> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (true) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      if constexpr (is_exact_v<T>) {
        params.push_back(Rational::parse(item));
      } else {
        params.push_back(parse_double(item));
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  for (auto k : {FamilyKind::Jacobi, FamilyKind::Laguerre, FamilyKind::Hermite, FamilyKind::Bessel,
                 FamilyKind::Monomial, FamilyKind::ChebyshevT, FamilyKind::DualHahn, FamilyKind::ContinuousDualHahn}) {
    if (name == to_string(k)) return Family<T>::make(k, std::move(params));
  }
  if (name == "legendre" && params.empty()) return Family<T>::jacobi(T(0), T(0));
  throw Error(ErrorCode::Parse, "unknown family '" + name + "'");
}

template <class T>
struct Recurrence {
  T u, v, w;  ///< sigma phi_n = u phi_{n+1} + v phi_n + w phi_{n-1}
};

/// Recurrence variable sigma(x) of the family.
template <class T>
T spectral_variable(const Family<T>& f, const T& x) {
  switch (f.kind) {
    case FamilyKind::DualHahn: return x * (x + f.p(0) + f.p(1) + T(1));
    case FamilyKind::ContinuousDualHahn: return x * x;
    default: return x;
  }
}

namespace detail {

/// Generalized Bessel y_n(x; a, b) = sum_k C(n, k) (n + a - 1)_k (x / b)^k.
template <class T>
Polynomial<T> bessel_explicit(const T& a, const T& b, int n) {
  std::vector<T> c;
  T binom(1), poch(1), bpow(1);
  for (int k = 0; k <= n; ++k) {
    c.push_back(binom * poch / bpow);
    binom = binom * T(n - k) / T(k + 1);
    poch *= T(n - 1 + k) + a;
    bpow *= b;
  }
  return Polynomial<T>(std::move(c));
}

/// Coefficients (c_{n+1}, c_n, c_{n-1}) of p in the basis phi_0..phi_{n+1},
/// checking that every lower component vanishes.
template <class T>
std::tuple<T, T, T> peel_three(const Polynomial<T>& p, const std::vector<Polynomial<T>>& basis, int n) {
  auto c = expand_in_basis(p, basis);
  double scale = 0;
  for (const auto& v : c) scale = std::max(scale, std::abs(to_double(v)));
  for (int j = 0; j < n - 1; ++j) {
    if (!negligible(c[static_cast<std::size_t>(j)], scale)) {
      throw IndexedError(ErrorCode::InternalConsistency, "relation is not three-term", j);
    }
  }
  auto at = [&](int j) { return j >= 0 && j < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(j)] : T(0); };
  return {at(n + 1), at(n), at(n - 1)};
}

}  // namespace detail

template <class T>
Polynomial<T> family_polynomial(const Family<T>& f, int n);

/// Recurrence coefficients in the family's standard normalization.
template <class T>
Recurrence<T> recurrence_coeffs(const Family<T>& f, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative degree");
  const T one(1), two(2), N(n);
  switch (f.kind) {
    case FamilyKind::Jacobi: {
      const T& a = f.p(0);
      const T& b = f.p(1);
      const T s = a + b;
      if (n == 0) return {two / (s + two), (b - a) / (s + two), T(0)};
      const T u = two * (N + one) * (N + s + one) / ((two * N + s + one) * (two * N + s + two));
      const T v = (b * b - a * a) / ((two * N + s) * (two * N + s + two));
      const T w = two * (N + a) * (N + b) / ((two * N + s) * (two * N + s + one));
      return {u, v, w};
    }
    case FamilyKind::Laguerre: return {-(N + one), two * N + f.p(0) + one, -(N + f.p(0))};
    case FamilyKind::Hermite: return {one / two, T(0), N};
    case FamilyKind::ChebyshevT:
      if (n == 0) return {one, T(0), T(0)};
      return {one / two, T(0), one / two};
    case FamilyKind::Monomial: return {one, T(0), T(0)};
    case FamilyKind::Bessel: {
      std::vector<Polynomial<T>> basis;
      for (int k = 0; k <= n + 1; ++k) basis.push_back(detail::bessel_explicit(f.p(0), f.p(1), k));
      auto [u, v, w] = detail::peel_three(Polynomial<T>{T(0), one} * basis[static_cast<std::size_t>(n)], basis, n);
      return {u, v, w};
    }
    case FamilyKind::DualHahn: {
      const long Nk = f.dual_hahn_N();
      if (n >= Nk) throw IndexedError(ErrorCode::OutOfDomain, "dual Hahn recurrence truncates at n = N", n);
      const T A = (N + f.p(0) + one) * (N - T(Nk));
      const T C = N * (N - f.p(1) - T(Nk) - one);
      return {A, -(A + C), C};
    }
    case FamilyKind::ContinuousDualHahn: {
      const T& a = f.p(0);
      const T& b = f.p(1);
      const T& c = f.p(2);
      auto A = [&](const T& k) { return (k + a + b) * (k + a + c); };
      const T C = N * (N + b + c - one);
      return {-one, A(N) + C - a * a, n == 0 ? T(0) : -C * A(N - one)};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family");
}

/// phi_n as a polynomial in the recurrence variable.
template <class T>
Polynomial<T> family_polynomial(const Family<T>& f, int n) {
  if (f.kind == FamilyKind::Bessel) return detail::bessel_explicit(f.p(0), f.p(1), n);
  if (f.kind == FamilyKind::DualHahn && n > f.dual_hahn_N()) {
    throw IndexedError(ErrorCode::OutOfDomain, "dual Hahn degree exceeds N", n);
  }
  Polynomial<T> prev, cur{T(1)};
  const Polynomial<T> x{T(0), T(1)};
  for (int k = 0; k < n; ++k) {
    const auto r = recurrence_coeffs(f, k);
    auto next = (x * cur - cur * r.v - prev * r.w) * (T(1) / r.u);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Direct continuous dual Hahn S_n(x^2; a, b, c) =
/// (a+b)_n (a+c)_n sum_k (-n)_k prod_{j<k} ((a+j)^2 + x^2) / ((a+b)_k (a+c)_k k!).
inline double cdh_direct(double a, double b, double c, int n, double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (k - n) * ((a + k) * (a + k) + x * x) / ((a + b + k) * (a + c + k) * (k + 1));
    sum += term;
  }
  return pochhammer(a + b, n) * pochhammer(a + c, n) * sum;
}

/// Explicit dual Hahn R_n(lambda(x)) = sum_k (-n)_k (-x)_k (x+g+d+1)_k / ((g+1)_k (-N)_k k!).
template <class T>
T dual_hahn_explicit(const T& g, const T& d, long N, int n, const T& x) {
  T term(1), sum(1);
  for (int k = 0; k < n; ++k) {
    term = term * (T(k - n)) * (T(k) - x) * (x + g + d + T(1 + k)) / ((g + T(1 + k)) * T(k - N) * T(k + 1));
    sum += term;
  }
  return sum;
}

/// phi_n(x), by forward recurrence in sigma(x).
template <class T>
T eval_family(const Family<T>& f, int n, const T& x) {
  if (f.kind == FamilyKind::Bessel) return family_polynomial(f, n)(x);
  const T s = spectral_variable(f, x);
  T prev(0), cur(1);
  for (int k = 0; k < n; ++k) {
    const auto r = recurrence_coeffs(f, k);
    T next = ((s - r.v) * cur - r.w * prev) / r.u;
    prev = std::move(cur);
    cur = std::move(next);
    if constexpr (!is_exact_v<T>) {
      if (!(std::abs(cur) <= 1e300)) {
        throw IndexedError(ErrorCode::OutOfDomain, "family value overflows; use eval_family_scaled", k + 1);
      }
    }
  }
  return cur;
}

/// log|phi_n(x)| and sign, for degrees where phi_n overflows.
inline ScaledValue eval_family_scaled(const Family<double>& f, int n, double x) {
  if (f.kind == FamilyKind::Bessel) {
    const double v = family_polynomial(f, n)(x);
    return {std::log(std::abs(v)), sign_of(v)};
  }
  const double s = spectral_variable(f, x);
  double prev = 0, cur = 1, shift = 0;
  for (int k = 0; k < n; ++k) {
    const auto r = recurrence_coeffs(f, k);
    const double next = ((s - r.v) * cur - r.w * prev) / r.u;
    prev = cur;
    cur = next;
    const double m = std::max(std::abs(prev), std::abs(cur));
    if (m > 1e100) {
      prev /= m;
      cur /= m;
      shift += std::log(m);
    }
  }
  return {std::log(std::abs(cur)) + shift, sign_of(cur)};
}

/// A y'' + B y' + lambda_n y = 0 for the Bochner families.
template <class T>
struct BochnerData {
  Polynomial<T> A, B;
  T lambda;
};

template <class T>
BochnerData<T> bochner_data(const Family<T>& f, int n) {
  const T N(n), one(1), two(2);
  switch (f.kind) {
    case FamilyKind::Jacobi: {
      const T& a = f.p(0);
      const T& b = f.p(1);
      return {Polynomial<T>{one, T(0), -one}, Polynomial<T>{b - a, -(a + b + two)}, N * (N + a + b + one)};
    }
    case FamilyKind::ChebyshevT: return {Polynomial<T>{one, T(0), -one}, Polynomial<T>{T(0), -one}, N * N};
    case FamilyKind::Laguerre: return {Polynomial<T>{T(0), one}, Polynomial<T>{f.p(0) + one, -one}, N};
    case FamilyKind::Hermite: return {Polynomial<T>{one}, Polynomial<T>{T(0), -two}, two * N};
    case FamilyKind::Bessel:
      return {Polynomial<T>{T(0), T(0), one}, Polynomial<T>{f.p(1), f.p(0)}, -N * (N + f.p(0) - one)};
    case FamilyKind::Monomial: return {Polynomial<T>{T(0), T(0), one}, Polynomial<T>{T(0), one}, -N * N};
    default: throw Error(ErrorCode::InvalidArgument, "family is not one of the Bochner classes");
  }
}

/// max |A phi_n'' + B phi_n' + lambda_n phi_n| over the samples.
template <class T>
T bochner_residual(const Family<T>& f, int n, const std::vector<T>& samples) {
  const auto d = bochner_data(f, n);
  const auto y = family_polynomial(f, n);
  const auto r = d.A * y.derivative().derivative() + d.B * y.derivative() + y * d.lambda;
  T worst(0);
  for (const auto& x : samples) {
    T v = r(x);
    if (v < T(0)) v = -v;
    if (worst < v) worst = v;
  }
  return worst;
}

/// G phi_n' = A_n phi_{n+1} + B_n phi_n + C_n phi_{n-1}.
template <class T>
struct AscRelation {
  Polynomial<T> G;
  T A, B, C;
};

template <class T>
AscRelation<T> asc_relation(const Family<T>& f, int n) {
  const T N(n), one(1);
  switch (f.kind) {
    case FamilyKind::Hermite: return {Polynomial<T>{one}, T(0), T(0), T(2) * N};
    case FamilyKind::Laguerre: return {Polynomial<T>{T(0), one}, T(0), N, -(N + f.p(0))};
    case FamilyKind::Monomial: return {Polynomial<T>{T(0), one}, T(0), N, T(0)};
    case FamilyKind::Jacobi:
    case FamilyKind::ChebyshevT:
    case FamilyKind::Bessel: {
      const Polynomial<T> G = f.kind == FamilyKind::Bessel ? Polynomial<T>{T(0), T(0), one}
                                                           : Polynomial<T>{one, T(0), -one};
      std::vector<Polynomial<T>> basis;
      for (int k = 0; k <= n + 1; ++k) basis.push_back(family_polynomial(f, k));
      auto [a, b, c] = detail::peel_three(G * basis[static_cast<std::size_t>(n)].derivative(), basis, n);
      return {G, a, b, c};
    }
    default: throw Error(ErrorCode::InvalidArgument, "no Al-Salam-Chihara relation for this family");
  }
}

/// Total mass of the orthogonality measure (Chebyshev, Jacobi, Laguerre, Hermite).
template <class T>
double family_mass(const Family<T>& f) {
  switch (f.kind) {
    case FamilyKind::Jacobi: {
      const double a = to_double(f.p(0)), b = to_double(f.p(1));
      return std::exp((a + b + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
    }
    case FamilyKind::ChebyshevT: return std::numbers::pi;
    case FamilyKind::Laguerre: return std::tgamma(to_double(f.p(0)) + 1);
    case FamilyKind::Hermite: return std::sqrt(std::numbers::pi);
    default: throw Error(ErrorCode::InvalidArgument, "family has no positive orthogonality measure on the line");
  }
}

/// Orthonormal Jacobi operator: b_n = v_n, a_n = sqrt(u_n w_{n+1}).
template <class T>
JacobiOperator<double> orthonormal_jacobi(const Family<T>& f) {
  family_mass(f);
  return {[f](long n) {
            const double uw = to_double(recurrence_coeffs(f, static_cast<int>(n)).u) *
                              to_double(recurrence_coeffs(f, static_cast<int>(n + 1)).w);
            return std::sqrt(uw);
          },
          [f](long n) { return to_double(recurrence_coeffs(f, static_cast<int>(n)).v); }, {}};
}

/// Gauss rule of size n for the family's orthogonality measure.
template <class T>
QuadratureRule gauss_rule(const Family<T>& f, int n) {
  return golub_welsch(orthonormal_jacobi(f), n, family_mass(f));
}

/// Dual Hahn weight at x = 0..N:
/// (2x+g+d+1)(g+1)_x(-N)_x N! / ((-1)^x (x+g+d+1)_{N+1} (d+1)_x x!).
template <class T>
T dual_hahn_weight(const T& g, const T& d, long N, long x) {
  if (x < 0 || x > N) throw Error(ErrorCode::OutOfDomain, "dual Hahn support is x = 0..N");
  const T X(x);
  T num = (T(2) * X + g + d + T(1)) * pochhammer(g + T(1), static_cast<int>(x)) * pochhammer(T(-N), static_cast<int>(x)) *
          pochhammer(T(1), static_cast<int>(N));
  T den = pochhammer(X + g + d + T(1), static_cast<int>(N + 1)) * pochhammer(d + T(1), static_cast<int>(x)) *
          pochhammer(T(1), static_cast<int>(x));
  if (x % 2) num = -num;
  return num / den;
}

/// sum_x w(x) R_n(lambda(x))^2 = 1 / (C(g+n, n) C(d+N-n, N-n)).
template <class T>
T dual_hahn_norm(const T& g, const T& d, long N, int n) {
  auto binom = [](const T& top, int k) { return pochhammer(top - T(k - 1), k) / pochhammer(T(1), k); };
  return T(1) / (binom(g + T(n), n) * binom(d + T(N - n), static_cast<int>(N - n)));
}

/// Continuous dual Hahn weight with parameters (a, b, c):
/// |Gamma(a+ix)Gamma(b+ix)Gamma(c+ix)/Gamma(2ix)|^2 / (2 pi Gamma(a+b)Gamma(a+c)Gamma(b+c)).
inline double cdh_weight_abc(double a, double b, double c, double x) {
  if (!(x > 0)) throw Error(ErrorCode::OutOfDomain, "continuous dual Hahn weight needs x > 0");
  const double lg = log_abs_gamma({a, x}) + log_abs_gamma({b, x}) + log_abs_gamma({c, x}) - log_abs_gamma({0.0, 2 * x});
  const double norm = std::log(2 * std::numbers::pi) + std::lgamma(a + b) + std::lgamma(a + c) + std::lgamma(b + c);
  return std::exp(2 * lg - norm);
}

/// Morse continuous-spectrum weight w(gamma) for (b, N).
inline double cdh_weight(double b, long N, double gamma) {
  if (!(gamma > 0)) throw Error(ErrorCode::OutOfDomain, "continuous weight needs gamma > 0");
  if (!(b > N - 0.5)) throw Error(ErrorCode::OutOfDomain, "continuous weight needs b > N - 1/2");
  return cdh_weight_abc(b + 0.5, N - b + 0.5, b - N + 0.5, gamma);
}

}  // namespace jmatrix
