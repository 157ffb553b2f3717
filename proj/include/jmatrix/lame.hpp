#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "jmatrix/error.hpp"
#include "jmatrix/jacspec.hpp"
#include "jmatrix/opfamilies.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/rational.hpp"
#include "jmatrix/tdop.hpp"

namespace jmatrix {

/// Algebraic Lame operator A f'' + B f' - (1/4)(m(m+1) x + E) f with
/// A = (x-e1)(x-e2)(x-e3), B = A'/2. The affine map x = a y + b with
/// a = (e1-e2)/2, b = (e1+e2)/2 sends e1, e2, e3 to 1, -1, alpha = 3 e3 / (e1-e2).
template <class T>
struct LameModel {
  T e1, e2, e3, m;
  T a, b, alpha;

  T m_factor() const { return m * (m + T(1)); }
  T b_over_a() const { return b / a; }
};

template <class T>
LameModel<T> build_lame_model(T e1, T e2, T e3, T m) {
  if (e1 == e2 || e1 == e3 || e2 == e3) throw Error(ErrorCode::InvalidArgument, "branch values must be distinct");
  const T sum = e1 + e2 + e3;
  if constexpr (is_exact_v<T>) {
    if (!is_zero(sum)) throw Error(ErrorCode::InvalidArgument, "branch values must sum to zero");
  } else {
    const double scale = std::max({std::abs(e1), std::abs(e2), std::abs(e3)});
    if (std::abs(sum) > 1e-12 * scale) throw Error(ErrorCode::InvalidArgument, "branch values must sum to zero");
  }
  LameModel<T> md{e1, e2, e3, m, (e1 - e2) / T(2), (e1 + e2) / T(2), T(3) * e3 / (e1 - e2)};
  if (md.alpha == T(1) || md.alpha == T(-1)) throw Error(ErrorCode::OutOfDomain, "alpha = +-1 is excluded");
  return md;
}

/// The E = 0 operator in x.
template <class T>
TDOperator<T> algebraic_operator(const LameModel<T>& md) {
  const auto A = Polynomial<T>{-md.e1, T(1)} * Polynomial<T>{-md.e2, T(1)} * Polynomial<T>{-md.e3, T(1)};
  return differential_td(A, A.derivative() * ratio<T>(1, 2), Polynomial<T>{T(0), -md.m_factor() / T(4)});
}

/// The E = 0 operator in y, divided by a: (y-1)(y+1)(y-alpha) g'' + (1/2)(...)' g' - (1/4) m(m+1)(y + b/a) g.
template <class T>
TDOperator<T> transformed_operator(const LameModel<T>& md) {
  const auto A = Polynomial<T>{T(-1), T(1)} * Polynomial<T>{T(1), T(1)} * Polynomial<T>{-md.alpha, T(1)};
  const T c = -md.m_factor() / T(4);
  return differential_td(A, A.derivative() * ratio<T>(1, 2), Polynomial<T>{c * md.b_over_a(), c});
}

template <class T>
struct ChebRow {
  T upper, diag, lower;  ///< L T_n = upper T_{n+1} + diag T_n + lower T_{n-1}
};

/// Row n of the transformed operator in the Chebyshev basis. Row 0 is
/// L T_0 = -(1/4) m(m+1) T_1 - (1/4) m(m+1)(b/a) T_0, which is not the n = 0
/// case of the general row.
template <class T>
ChebRow<T> cheb_tridiag_coeffs(const LameModel<T>& md, long n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative index");
  const T mf = md.m_factor();
  const T diag = -md.alpha * T(n * n) - mf * md.b_over_a() / T(4);
  if (n == 0) return {-mf / T(4), diag, T(0)};
  const T N(n), two(2), one(1);
  return {(two * N - md.m) * (two * N + md.m + one) / T(8), diag, (two * N + md.m) * (two * N - md.m - one) / T(8)};
}

/// L T_n minus its three-term expansion; the zero polynomial when the row is right.
template <class T>
Polynomial<T> tridiag_residual(const LameModel<T>& md, long n) {
  const auto L = transformed_operator(md);
  const auto cheb = Family<T>::chebyshev_t();
  const auto row = cheb_tridiag_coeffs(md, n);
  auto r = L(family_polynomial(cheb, static_cast<int>(n))) - family_polynomial(cheb, static_cast<int>(n + 1)) * row.upper -
           family_polynomial(cheb, static_cast<int>(n)) * row.diag;
  if (n > 0) r -= family_polynomial(cheb, static_cast<int>(n - 1)) * row.lower;
  return r;
}

struct LameEvenSpectrum {
  long k = 0;
  std::vector<std::vector<double>> matrix;  ///< E P = M P on span(T_0..T_k)
  std::vector<double> eigenvalues;           ///< lambda, ascending, dense solve of the transformed operator
  std::vector<double> root_eigenvalues;      ///< ascending, roots of P_{k+1}
  std::vector<double> energies;              ///< E in A f'' + B f' - (1/4)(m(m+1) x + E) f = 0, i.e. 4 a lambda
  std::vector<std::vector<double>> Pcoeffs;  ///< Pcoeffs[i] = (P_0..P_k)(lambda_i), P_0 = 1
  bool symmetrized = false;                  ///< diagonal similarity was used
  double max_disagreement = 0.0;
};

namespace detail {

/// All complex roots of a real polynomial (Aberth-Ehrlich iteration).
inline std::vector<std::complex<double>> polynomial_roots(const Polynomial<double>& p) {
  const int n = p.degree();
  if (n < 1) return {};
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  for (auto& v : c) v /= p.leading();
  double radius = 0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[static_cast<std::size_t>(i)]));
  radius = 1 + radius;
  std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = std::polar(0.5 * radius, 2 * std::numbers::pi * (i + 0.25) / n);
  auto eval = [&](std::complex<double> x, std::complex<double>& d) {
    std::complex<double> v = 1.0;
    d = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      d = d * x + v;
      v = v * x + c[static_cast<std::size_t>(i)];
    }
    return v;
  };
  for (int it = 0; it < 500; ++it) {
    double change = 0;
    for (int i = 0; i < n; ++i) {
      auto& zi = z[static_cast<std::size_t>(i)];
      std::complex<double> d;
      const auto v = eval(zi, d);
      if (v == 0.0) continue;
      const auto ratio = v / d;
      std::complex<double> sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) sum += 1.0 / (zi - z[static_cast<std::size_t>(j)]);
      }
      const auto step = ratio / (1.0 - ratio * sum);
      zi -= step;
      change = std::max(change, std::abs(step) / std::max(1.0, std::abs(zi)));
    }
    if (change < 1e-16) break;
  }
  return z;
}

}  // namespace detail

/// Finite spectrum on span(T_0..T_k) for m = 2k: dense eigensolve of the
/// P-recurrence matrix, and roots of P_{k+1}(E) = (E - D_k) P_k - U_{k-1} P_{k-1}.
template <class T>
LameEvenSpectrum even_spectrum(const LameModel<T>& md, double tol = 1e-9) {
  const double mm = to_double(md.m);
  if (mm < 0 || mm != std::floor(mm) || static_cast<long>(mm) % 2 != 0) {
    throw Error(ErrorCode::OutOfDomain, "even_spectrum needs m = 2k, k a nonnegative integer");
  }
  LameEvenSpectrum out;
  out.k = static_cast<long>(mm) / 2;
  const auto dim = static_cast<std::size_t>(out.k + 1);
  std::vector<double> U(dim), D(dim), W(dim + 1);
  for (std::size_t j = 0; j < dim; ++j) {
    const auto row = cheb_tridiag_coeffs(md, static_cast<long>(j));
    U[j] = to_double(row.upper);
    D[j] = to_double(row.diag);
    W[j] = to_double(row.lower);
  }
  out.matrix.assign(dim, std::vector<double>(dim, 0.0));
  for (std::size_t j = 0; j < dim; ++j) {
    out.matrix[j][j] = D[j];
    if (j + 1 < dim) {
      out.matrix[j][j + 1] = W[j + 1];
      out.matrix[j + 1][j] = U[j];
    }
  }

  // (i) dense eigensolve
  bool positive = true;
  for (std::size_t j = 0; j + 1 < dim; ++j) positive = positive && U[j] * W[j + 1] > 0;
  out.symmetrized = positive;
  if (positive) {
    std::vector<double> off;
    for (std::size_t j = 0; j + 1 < dim; ++j) off.push_back(std::sqrt(U[j] * W[j + 1]));
    out.eigenvalues = eig_symmetric_tridiagonal(D, off).eigenvalues;
  } else {
    Eigen::MatrixXd M(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) M(static_cast<long>(i), static_cast<long>(j)) = out.matrix[i][j];
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NotConverged, "dense eigensolve failed");
    double scale = 1;
    for (long i = 0; i < static_cast<long>(dim); ++i) scale = std::max(scale, std::abs(es.eigenvalues()(i)));
    for (long i = 0; i < static_cast<long>(dim); ++i) {
      const auto ev = es.eigenvalues()(i);
      if (std::abs(ev.imag()) > tol * scale) throw Error(ErrorCode::InternalConsistency, "non-real eigenvalue");
      out.eigenvalues.push_back(ev.real());
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  }

  // (ii) roots of P_{k+1}
  Polynomial<double> prev, cur{1.0};
  const Polynomial<double> E{0.0, 1.0};
  for (std::size_t j = 0; j < dim; ++j) {
    auto next = E * cur - cur * D[j];
    if (j > 0) next -= prev * U[j - 1];
    if (j + 1 < dim) next = next * (1.0 / W[j + 1]);
    prev = std::move(cur);
    cur = std::move(next);
  }
  double scale = 1;
  for (double v : out.eigenvalues) scale = std::max(scale, std::abs(v));
  for (const auto& r : detail::polynomial_roots(cur)) {
    if (std::abs(r.imag()) > tol * scale) throw Error(ErrorCode::InternalConsistency, "non-real root of P_{k+1}");
    out.root_eigenvalues.push_back(r.real());
  }
  std::sort(out.root_eigenvalues.begin(), out.root_eigenvalues.end());
  for (std::size_t i = 0; i < dim; ++i) {
    out.max_disagreement = std::max(out.max_disagreement, std::abs(out.eigenvalues[i] - out.root_eigenvalues[i]));
  }
  if (out.max_disagreement > tol * scale) {
    throw Error(ErrorCode::InternalConsistency, "dense and P_{k+1}-root eigenvalues disagree");
  }
  for (std::size_t i = 1; i < dim; ++i) {
    if (out.eigenvalues[i] - out.eigenvalues[i - 1] <= 1e-12 * scale) throw Error(ErrorCode::NotSimple, "repeated eigenvalue");
  }

  // Eigenvectors as the null vector of M - lambda (SVD), scaled to P_0 = 1.
  // Forward substitution through the recurrence loses accuracy for extreme lambda.
  Eigen::MatrixXd M(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) M(static_cast<long>(i), static_cast<long>(j)) = out.matrix[i][j];
  }
  for (double lam : out.eigenvalues) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M - lam * Eigen::MatrixXd::Identity(static_cast<long>(dim), static_cast<long>(dim)),
                                          Eigen::ComputeFullV);
    const Eigen::VectorXd v = svd.matrixV().col(static_cast<long>(dim) - 1);
    if (v(0) == 0.0) throw Error(ErrorCode::InternalConsistency, "eigenvector with P_0 = 0");
    std::vector<double> P(dim);
    for (std::size_t j = 0; j < dim; ++j) P[j] = v(static_cast<long>(j)) / v(0);
    out.Pcoeffs.push_back(std::move(P));
    out.energies.push_back(4 * to_double(md.a) * lam);
  }
  return out;
}

inline Polynomial<double> to_double_poly(const Polynomial<double>& p) { return p; }
inline Polynomial<double> to_double_poly(const Polynomial<Rational>& p) { return to_float(p); }

/// Residual of A f'' + B f' - (1/4)(m(m+1) x + E) f for f(x) = sum_n P_n T_n((x - b)/a),
/// relative to the sum of the term magnitudes, max over the samples.
template <class T>
double even_eigenfunction_residual(const LameEvenSpectrum& spec, const LameModel<T>& md, std::size_t which,
                                   const std::vector<double>& samples) {
  if (which >= spec.eigenvalues.size()) throw Error(ErrorCode::InvalidArgument, "eigenpair index out of range");
  const auto cheb = Family<double>::chebyshev_t();
  Polynomial<double> psi;
  for (std::size_t n = 0; n < spec.Pcoeffs[which].size(); ++n) psi += family_polynomial(cheb, static_cast<int>(n)) * spec.Pcoeffs[which][n];
  const double a = to_double(md.a), b = to_double(md.b);
  const auto f = shift_affine(psi, 1.0 / a, -b / a);
  const auto L = algebraic_operator(md);
  const auto A = to_double_poly(L.A), B = to_double_poly(L.B);
  const double mf = to_double(md.m_factor());
  const double E = spec.energies[which];
  const auto f1 = f.derivative(), f2 = f1.derivative();
  // Rounding scale: every polynomial evaluated with |coefficients| at max(1, |x|).
  auto mag = [](const Polynomial<double>& p, double x) {
    double v = 0;
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) v = v * std::max(1.0, std::abs(x)) + std::abs(*it);
    return v;
  };
  double worst = 0;
  for (double x : samples) {
    const double t1 = A(x) * f2(x), t2 = B(x) * f1(x), t3 = 0.25 * (mf * x + E) * f(x);
    const double scale = mag(A, x) * mag(f2, x) + mag(B, x) * mag(f1, x) + 0.25 * (std::abs(mf * x) + std::abs(E)) * mag(f, x);
    if (scale > 0) worst = std::max(worst, std::abs(t1 + t2 - t3) / scale);
  }
  return worst;
}

/// Symmetric form of the Chebyshev rows for m in (2k+1, 2k+2): T_n = alpha_n p_n,
/// L p_n = a_n p_{n+1} + b_n p_n + a_{n-1} p_{n-1} for n >= 1, L p_0 = 2 a_0 p_1 + b_0 p_0.
struct LameOrthonormal {
  std::vector<double> alpha_n, a, b;
  bool row0_asymmetric = true;  ///< the n = 0 row carries 2 a_0, not a_0
  JacobiOperator<double> J;     ///< a_n, b_n for every n (unbounded)
};

inline bool lame_orthonormal_admissible(double m) {
  const double k = std::floor((m - 1) / 2);
  return k >= 0 && m > 2 * k + 1 && m < 2 * k + 2;
}

template <class T>
LameOrthonormal orthonormal_form(const LameModel<T>& md, long n_max) {
  const double m = to_double(md.m);
  if (!lame_orthonormal_admissible(m)) throw Error(ErrorCode::OutOfDomain, "m must lie in (2k+1, 2k+2)");
  const double alpha = to_double(md.alpha), ba = to_double(md.b_over_a());
  auto an = [m](long n) {
    const double r = (n + 0.5 * m + 1) * (n - 0.5 * m + 0.5) * (n - 0.5 * m) * (n + 0.5 * m + 0.5);
    if (!(r > 0)) throw IndexedError(ErrorCode::InternalConsistency, "orthonormal radicand not positive", n);
    return 0.5 * std::sqrt(r);
  };
  auto bn = [m, alpha, ba](long n) { return -alpha * n * n - 0.25 * m * (m + 1) * ba; };
  LameOrthonormal out;
  double sq = 1.0;
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) {
      const double j = n - 1.0;
      sq *= (0.5 * (1 - m) + j) * (1 + 0.5 * m + j) / ((-0.5 * m + j) * (0.5 * (m + 1) + j));
    }
    if (!(sq > 0)) throw IndexedError(ErrorCode::InternalConsistency, "alpha_n radicand not positive", n);
    out.alpha_n.push_back(std::sqrt(sq));
    out.a.push_back(an(n));
    out.b.push_back(bn(n));
  }
  out.J = {an, bn, {}};
  return out;
}

struct LameDiagnostic {
  BerezanskiiResult test;
  double predicted_plus = 0, predicted_minus = 0;  ///< 1 - alpha, 1 + alpha
};

/// Berezanskii heuristic on the orthonormal form, with the predicted n^2 coefficients.
template <class T>
LameDiagnostic selfadjoint_diagnostic(const LameModel<T>& md, long n_max) {
  auto form = orthonormal_form(md, 0);
  const double alpha = to_double(md.alpha);
  return {berezanskii_test(form.J, n_max), 1 - alpha, 1 + alpha};
}

}  // namespace jmatrix
