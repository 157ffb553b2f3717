#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "jmatrix/error.hpp"
#include "jmatrix/jacspec.hpp"
#include "jmatrix/opfamilies.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/rational.hpp"
#include "jmatrix/special.hpp"
#include "jmatrix/tdop.hpp"

namespace jmatrix {

/// Schroedinger operator -d^2/dx^2 + b^2 (e^{-2x} - 2 e^{-x}) with N = floor(b + 1/2)
/// bound states.
template <class T>
struct MorseModel {
  T b;
  long N = 0;

  double bd() const { return to_double(b); }
  /// alpha = 2b - 2N, the Laguerre parameter of the basis.
  T alpha() const { return T(2) * b - T(2 * N); }
  /// s = b - N + 1/2, the decay exponent at x -> +infinity.
  T s() const { return b - T(N) + ratio<T>(1, 2); }
};

/// q(x) = b^2 (e^{-2x} - 2 e^{-x}).
inline double morse_potential(double b, double x) {
  const double e = std::exp(-x);
  return b * b * (e * e - 2 * e);
}

template <class T>
MorseModel<T> build_morse_model(T b) {
  if (!(b > T(0))) throw Error(ErrorCode::OutOfDomain, "Morse strength b must be positive");
  const T shifted = b + ratio<T>(1, 2);
  long N = 0;
  if constexpr (is_exact_v<T>) {
    N = shifted.floor();
    if (shifted == T(N)) throw Error(ErrorCode::HalfIntegerUnsupported, "b in 1/2 + N is not supported");
  } else {
    const double f = std::floor(shifted);
    if (shifted == f) throw Error(ErrorCode::HalfIntegerUnsupported, "b in 1/2 + N is not supported");
    N = static_cast<long>(f);
  }
  return {b, N};
}

/// A = -z^2, B = (2N - 2b - 2 + z) z, C = -(N - b - 1/2)^2 + (1 - N) z on (0, infinity).
template <class T>
TDOperator<T> conjugated_operator(const MorseModel<T>& m) {
  const T N(m.N);
  const T shift = N - m.b - ratio<T>(1, 2);
  return differential_td(Polynomial<T>{T(0), T(0), T(-1)}, Polynomial<T>{T(0), T(2) * N - T(2) * m.b - T(2), T(1)},
                         Polynomial<T>{-shift * shift, T(1) - N});
}

/// Diagonal -(N-b-1/2)^2 + (1-N+n)(2n+2b-2N+1) - n.
template <class T>
T morse_diagonal(const MorseModel<T>& m, long n) {
  const T N(m.N), nn(n);
  const T shift = N - m.b - ratio<T>(1, 2);
  return -shift * shift + (T(1) - N + nn) * (T(2) * nn + T(2) * m.b - T(2) * N + T(1)) - nn;
}

/// Off-diagonal -(1-N+n) sqrt((n+1)(2b-2N+n+1)); the integer factor is
/// tested first so a_{N-1} is an exact zero.
template <class T>
double morse_offdiagonal(const MorseModel<T>& m, long n) {
  const long factor = 1 - m.N + n;
  if (factor == 0) return 0.0;
  return -static_cast<double>(factor) * std::sqrt((n + 1.0) * (to_double(m.alpha()) + n + 1.0));
}

struct MorseTridiag {
  JacobiOperator<double> J;
  long split = -1;  ///< a_split = 0 separates H^- = span(y_0..y_{N-1}) from H^+
};

template <class T>
MorseTridiag schrodinger_tridiag(const MorseModel<T>& m) {
  return {{[m](long n) { return morse_offdiagonal(m, n); }, [m](long n) { return to_double(morse_diagonal(m, n)); }, {}},
          m.N - 1};
}

/// -(b - k - 1/2)^2 for k = 0..N-1, ascending.
template <class T>
std::vector<double> bound_state_closed_form(const MorseModel<T>& m) {
  std::vector<double> out;
  for (long k = 0; k < m.N; ++k) out.push_back(-std::pow(m.bd() - k - 0.5, 2));
  return out;
}

/// Eigen-decomposition of the H^- block, checked against the closed form.
template <class T>
SpectrumResult bound_states(const MorseModel<T>& m, double tol = 1e-10) {
  if (m.N == 0) return {};
  auto result = eig_block(schrodinger_tridiag(m).J, {0, m.N - 1});
  const auto expect = bound_state_closed_form(m);
  for (std::size_t i = 0; i < expect.size(); ++i) {
    if (std::abs(result.eigenvalues[i] - expect[i]) > tol) {
      throw IndexedError(ErrorCode::InternalConsistency, "bound state disagrees with -(b-m-1/2)^2",
                         static_cast<long>(i));
    }
  }
  return result;
}

namespace detail {

/// log sqrt(n! / Gamma(alpha + n + 1)).
inline double morse_log_norm(double alpha, long n) { return 0.5 * (std::lgamma(n + 1.0) - std::lgamma(alpha + n + 1.0)); }

/// Laguerre L_0..L_{n_max} at z by forward recurrence.
inline std::vector<double> laguerre_values(double alpha, long n_max, double z) {
  std::vector<double> L{1.0};
  if (n_max >= 1) L.push_back(1.0 + alpha - z);
  for (long k = 1; k < n_max; ++k) {
    L.push_back(((2.0 * k + 1 + alpha - z) * L[static_cast<std::size_t>(k)] - (k + alpha) * L[static_cast<std::size_t>(k - 1)]) /
                (k + 1.0));
  }
  return L;
}

}  // namespace detail

/// y_n(x) = (2b)^s sqrt(n!/Gamma(2b-2N+n+1)) e^{-s x} e^{-b e^{-x}} L_n^{(2b-2N)}(2b e^{-x}),
/// assembled in log space.
template <class T>
double eval_basis(const MorseModel<T>& m, long n, double x) {
  const double b = m.bd(), s = to_double(m.s()), alpha = to_double(m.alpha());
  const double log_z = std::log(2 * b) - x;
  const double z = std::exp(log_z);
  const auto L = eval_family_scaled(Family<double>::laguerre(alpha), static_cast<int>(n), z);
  if (L.sign == 0) return 0.0;
  const double log_y = s * log_z - 0.5 * z + detail::morse_log_norm(alpha, n) + L.log_abs;
  return L.sign * std::exp(log_y);
}

inline const std::vector<double>& default_morse_grid() {
  static const std::vector<double> grid{-3, -2, -1, 0, 1, 2, 3};
  return grid;
}

/// max |(-y_n'' + q y_n) - (a_n y_{n+1} + b_n y_n + a_{n-1} y_{n-1})| over the samples.
///
/// With z = 2b e^{-x} and theta = z d/dz, d^2/dx^2 = theta^2, and
/// theta^2 (z^s e^{-z/2} L) = z^s e^{-z/2} [(s - z/2)^2 L - (z/2) L + 2 (s - z/2) theta L + theta^2 L],
/// where theta L_n = n L_n - (n + alpha) L_{n-1}. The common factor z^s e^{-z/2}
/// is applied last so the polynomial part is formed at full precision.
template <class T>
double action_residual(const MorseModel<T>& m, long n, const std::vector<double>& samples = default_morse_grid()) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative basis index");
  const double b = m.bd(), s = to_double(m.s()), alpha = to_double(m.alpha());
  const auto J = schrodinger_tridiag(m).J;
  double worst = 0.0;
  for (double x : samples) {
    const double z = 2 * b * std::exp(-x);
    const double q = z * z / 4 - b * z;
    const auto L = detail::laguerre_values(alpha, n + 1, z);
    auto Lk = [&](long k) { return k < 0 ? 0.0 : L[static_cast<std::size_t>(k)]; };
    auto theta = [&](long k) { return k < 0 ? 0.0 : k * Lk(k) - (k + alpha) * Lk(k - 1); };
    const double theta2 = n * theta(n) - (n + alpha) * theta(n - 1);
    const double t = s - z / 2;
    const double second = t * t * Lk(n) - (z / 2) * Lk(n) + 2 * t * theta(n) + theta2;
    auto K = [&](long k) { return std::exp(detail::morse_log_norm(alpha, k)); };
    double r = K(n) * (-second + q * Lk(n)) - J.a(n) * K(n + 1) * Lk(n + 1) - J.b(n) * K(n) * Lk(n);
    if (n > 0) r -= J.a(n - 1) * K(n - 1) * Lk(n - 1);
    const double envelope = std::exp(s * std::log(z) - z / 2);
    worst = std::max(worst, std::abs(envelope * r));
  }
  return worst;
}

/// P_n = sqrt((2b-2N+1)_n / n!) R_n(lambda(N-1-level); 2b-2N, 0, N-1), n = 0..N-1:
/// the H^- eigenvector for -(b - level - 1/2)^2.
template <class T>
std::vector<double> discrete_eigvectors(const MorseModel<T>& m, long level) {
  if (level < 0 || level >= m.N) throw Error(ErrorCode::OutOfDomain, "bound level must lie in 0..N-1");
  const long Nk = m.N - 1;
  const T g = m.alpha();
  const T x(Nk - level);
  std::vector<double> P;
  for (long n = 0; n < m.N; ++n) {
    const T R = dual_hahn_explicit(g, T(0), Nk, static_cast<int>(n), x);
    const double scale = std::sqrt(to_double(pochhammer(g + T(1), static_cast<int>(n)) / pochhammer(T(1), static_cast<int>(n))));
    P.push_back(scale * to_double(R));
  }
  return P;
}

/// |cos| of the angle between the dual Hahn vector and the QL eigenvector.
template <class T>
double eigvector_alignment(const MorseModel<T>& m, long level) {
  const auto P = discrete_eigvectors(m, level);
  const auto spec = bound_states(m);
  // Eigenvalues ascend; -(b - level - 1/2)^2 is the (level)-th smallest.
  const auto& v = spec.vectors[static_cast<std::size_t>(level)];
  double dot = 0, np = 0, nv = 0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    dot += P[i] * v[i];
    np += P[i] * P[i];
    nv += v[i] * v[i];
  }
  return std::abs(dot) / std::sqrt(np * nv);
}

template <class T>
struct ExpansionResult {
  T C;               ///< stated constant (-1)^{N+m+1} ((N+m-2b)_{N-1-m} C(N-1, m))^{-1}
  T C_leading;       ///< constant forced by the leading coefficients
  T C_closed;        ///< ((2b-2N+1)_{N-1-m} C(N-1, m))^{-1}
  Polynomial<T> lhs, shape, rhs;  ///< rhs = C * shape
  T max_residual;    ///< largest coefficient of lhs - C * shape
  T shape_residual;  ///< largest coefficient of lhs - C_leading * shape
};

namespace detail {

template <class T>
T max_abs_coeff(const Polynomial<T>& p) {
  T worst(0);
  for (int k = 0; k <= p.degree(); ++k) {
    T c = p.coeff(k);
    if (c < T(0)) c = -c;
    if (worst < c) worst = c;
  }
  return worst;
}

}  // namespace detail

/// sum_{n<N} R_n(lambda(N-1-m); 2b-2N, 0, N-1) L_n^{(2b-2N)}(z) = C z^{N-1-m} L_m^{(2b-2m-1)}(z),
/// compared as polynomials in z.
///
/// Both sides are checked with the stated C and with the constant fixed by
/// the leading coefficients. Chu-Vandermonde summation of R_{N-1} gives the
/// latter in closed form as ((2b-2N+1)_{N-1-m} C(N-1, m))^{-1}; the stated
/// constant equals it only for m = N-1.
template <class T>
ExpansionResult<T> expansion_identity(const MorseModel<T>& m, long level) {
  if (level < 0 || level >= m.N) throw Error(ErrorCode::OutOfDomain, "bound level must lie in 0..N-1");
  const long N = m.N, Nk = N - 1;
  const T g = m.alpha();
  const auto lag = Family<T>::laguerre(g);
  ExpansionResult<T> out;
  for (long n = 0; n < N; ++n) {
    out.lhs += family_polynomial(lag, static_cast<int>(n)) * dual_hahn_explicit(g, T(0), Nk, static_cast<int>(n), T(Nk - level));
  }
  const int x = static_cast<int>(Nk - level);
  const T binom = pochhammer(T(x + 1), static_cast<int>(level)) / pochhammer(T(1), static_cast<int>(level));
  out.C = T(1) / (pochhammer(T(N + level) - T(2) * m.b, x) * binom);
  if ((N + level + 1) % 2) out.C = -out.C;
  out.C_closed = T(1) / (pochhammer(g + T(1), x) * binom);
  const auto inner = family_polynomial(Family<T>::laguerre(T(2) * m.b - T(2 * level) - T(1)), static_cast<int>(level));
  out.shape = Polynomial<T>::monomial(x, T(1)) * inner;
  out.rhs = out.shape * out.C;
  out.C_leading = out.lhs.degree() == out.shape.degree() ? out.lhs.leading() / out.shape.leading() : T(0);
  out.max_residual = detail::max_abs_coeff(out.lhs - out.rhs);
  out.shape_residual = detail::max_abs_coeff(out.lhs - out.shape * out.C_leading);
  return out;
}

struct ContinuousPolys {
  std::vector<double> recurrence;  ///< from the H^+ rows
  std::vector<double> direct;      ///< S_n / (n! sqrt((N+1)_n (2b-N+1)_n))
  double max_rel_discrepancy = 0;
};

/// P_n(gamma^2) two ways, n = 0..n_max.
template <class T>
ContinuousPolys continuous_polys(const MorseModel<T>& m, long n_max, double gamma) {
  const auto J = schrodinger_tridiag(m).J;
  const double z = gamma * gamma, b = m.bd();
  const long N = m.N;
  ContinuousPolys out;
  double prev = 0, cur = 1;
  out.recurrence.push_back(1.0);
  for (long n = 0; n < n_max; ++n) {
    const double next = ((z - J.b(N + n)) * cur - (n > 0 ? J.a(N + n - 1) : 0.0) * prev) / J.a(N + n);
    prev = cur;
    cur = next;
    out.recurrence.push_back(cur);
  }
  const double ca = b + 0.5, cb = N - b + 0.5, cc = b - N + 0.5;
  for (long n = 0; n <= n_max; ++n) {
    const double norm = std::exp(std::lgamma(n + 1.0) + 0.5 * (std::log(pochhammer(N + 1.0, static_cast<int>(n))) +
                                                                std::log(pochhammer(2 * b - N + 1.0, static_cast<int>(n)))));
    out.direct.push_back(cdh_direct(ca, cb, cc, static_cast<int>(n), gamma) / norm);
  }
  double scale = 0;
  for (double v : out.direct) scale = std::max(scale, std::abs(v));
  for (long n = 0; n <= n_max; ++n) {
    const double d = std::abs(out.recurrence[static_cast<std::size_t>(n)] - out.direct[static_cast<std::size_t>(n)]);
    out.max_rel_discrepancy = std::max(out.max_rel_discrepancy, d / std::max(std::abs(out.direct[static_cast<std::size_t>(n)]), 1e-300));
  }
  return out;
}

/// int_0^inf P_n(gamma^2) P_k(gamma^2) w(gamma) d gamma.
template <class T>
IntegrationResult parseval_check(const MorseModel<T>& m, long n, long k, double rtol = 1e-11) {
  if (m.N < 0) throw Error(ErrorCode::InvalidArgument, "invalid model");
  const double b = m.bd();
  const long N = m.N;
  const double ca = b + 0.5, cb = N - b + 0.5, cc = b - N + 0.5;
  auto P = [&](long j, double g) {
    const double norm = std::exp(std::lgamma(j + 1.0) + 0.5 * (std::log(pochhammer(N + 1.0, static_cast<int>(j))) +
                                                                std::log(pochhammer(2 * b - N + 1.0, static_cast<int>(j)))));
    return cdh_direct(ca, cb, cc, static_cast<int>(j), g) / norm;
  };
  HalfLineOptions opts;
  opts.rtol = rtol;
  opts.envelope = [&](double g) { return cdh_weight(b, N, g) * std::pow(1 + g * g, static_cast<double>(n + k)); };
  return integrate_half_line([&](double g) { return P(n, g) * P(k, g) * cdh_weight(b, N, g); }, 0.0, opts);
}

}  // namespace jmatrix
