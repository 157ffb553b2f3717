#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jmatrix/error.hpp"
#include "jmatrix/lowering.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/rational.hpp"

namespace jmatrix {

enum class TdCheck {
  Strict,          ///< deg A = 3 or deg B = 2 required
  BochnerRelaxed,  ///< accepts the classical case deg A <= 2, deg B <= 1
};

/// L = M_A T + M_B S + M_C, with S and T lowering the degree by one and two.
template <class T>
struct TDOperator {
  Polynomial<T> A, B, C;
  DegreeLoweringOperator<T> first;   ///< S
  DegreeLoweringOperator<T> second;  ///< T
  bool bochner_class = false;        ///< passed validation only in relaxed mode

  Polynomial<T> operator()(const Polynomial<T>& p) const {
    return A * second(p) + B * first(p) + C * p;
  }
};

template <class T>
TDOperator<T> validate_td(Polynomial<T> A, Polynomial<T> B, Polynomial<T> C, DegreeLoweringOperator<T> S,
                          DegreeLoweringOperator<T> Tq, TdCheck check = TdCheck::Strict) {
  if (S.shift() != 1 || Tq.shift() != 2) {
    throw Error(ErrorCode::InvalidArgument, "S must lower the degree by 1 and T by 2");
  }
  if (A.degree() > 3 || B.degree() > 2 || C.degree() > 1) {
    throw Error(ErrorCode::DegreeBounds, "need deg A <= 3, deg B <= 2, deg C <= 1 (got " +
                                             std::to_string(A.degree()) + ", " + std::to_string(B.degree()) +
                                             ", " + std::to_string(C.degree()) + ")");
  }
  const bool strict_shape = A.degree() == 3 || B.degree() == 2;
  if (!strict_shape && check == TdCheck::Strict) {
    throw Error(ErrorCode::DegreeBounds, "TD-operator needs deg A = 3 or deg B = 2");
  }
  return TDOperator<T>{std::move(A), std::move(B), std::move(C), std::move(S), std::move(Tq), !strict_shape};
}

/// Second-order differential operator A d^2/dx^2 + B d/dx + C.
template <class T>
TDOperator<T> differential_td(Polynomial<T> A, Polynomial<T> B, Polynomial<T> C, TdCheck check = TdCheck::Strict) {
  return validate_td(std::move(A), std::move(B), std::move(C), derivative_op<T>(), second_derivative_op<T>(), check);
}

template <class T>
Polynomial<T> apply_td(const TDOperator<T>& L, const Polynomial<T>& p) {
  return L(p);
}

/// Monic basis y_0..y_{n_max} with L y_n = A_n y_{n+1} + B_n y_n + C_n y_{n-1}
/// for rows n = 0..n_max-1 (C_0 = 0).
template <class T>
struct Tridiagonalization {
  std::vector<Polynomial<T>> y;
  std::vector<T> An, Bn, Cn;
  /// Rows n with A_n = 0 where the canonical free parameters left the lower
  /// coefficient equations unsatisfied and the block y_0..y_n was rebuilt.
  std::vector<int> repaired_rows;
  /// Rows where even the rebuild failed (zero pivot); the relation fails there.
  std::vector<int> defective_rows;
  /// Largest coefficient of L y_n outside the band, after orthogonalization.
  double off_band = 0.0;

  int rows() const { return static_cast<int>(An.size()); }
};

namespace detail {

template <class T>
bool negligible(const T& v, double scale) {
  if constexpr (is_exact_v<T>) {
    return v.is_zero();
  } else {
    return std::abs(to_double(v)) <= 1e-12 * std::max(1.0, scale);
  }
}

template <class T>
double max_abs(const Polynomial<T>& p) {
  double m = 0;
  for (const auto& c : p.coeffs()) m = std::max(m, std::abs(to_double(c)));
  return m;
}


/// Coefficients of p in a basis of polynomials with deg(basis[j]) = j.
template <class T>
std::vector<T> expand_in_basis(Polynomial<T> p, const std::vector<Polynomial<T>>& basis) {
  if (p.degree() >= static_cast<int>(basis.size())) {
    throw Error(ErrorCode::InvalidArgument, "basis too short to expand polynomial");
  }
  std::vector<T> coef(basis.size(), T(0));
  for (int d = p.degree(); d >= 0; --d) {
    const auto& b = basis[static_cast<std::size_t>(d)];
    T f = p.coeff(d) / b.leading();
    if (!is_zero(f)) {
      p -= b * f;
      coef[static_cast<std::size_t>(d)] = f;
    }
  }
  return coef;
}

}  // namespace detail

namespace detail {

/// Make the matrix of L on span(basis) tridiagonal by unit upper triangular
/// similarity, eliminating row by row against the
/// superdiagonal: y_j <- y_j - t y_{i+1} keeps every y_j monic of degree j.
/// Returns false on a zero pivot.
template <class T>
bool eliminate_block(const TDOperator<T>& L, Tridiagonalization<T>& tri, std::vector<Polynomial<T>> basis) {
  const auto dim = basis.size();
  std::vector<std::vector<T>> M(dim, std::vector<T>(dim, T(0)));
  double scale = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    auto col = expand_in_basis(L(basis[j]), basis);
    for (std::size_t i = 0; i < dim; ++i) {
      M[i][j] = col[i];
      scale = std::max(scale, std::abs(to_double(col[i])));
    }
  }
  for (std::size_t i = 0; i + 2 < dim; ++i) {
    for (std::size_t j = i + 2; j < dim; ++j) {
      if (negligible(M[i][j], scale)) continue;
      if (negligible(M[i][i + 1], scale)) return false;
      const T t = M[i][j] / M[i][i + 1];
      for (std::size_t r = 0; r < dim; ++r) M[r][j] -= t * M[r][i + 1];
      for (std::size_t c = 0; c < dim; ++c) M[i + 1][c] += t * M[j][c];
      basis[j] -= basis[i + 1] * t;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    tri.y[j] = basis[j];
    if (j + 1 < dim) tri.An[j] = M[j + 1][j];
    tri.Bn[j] = M[j][j];
    tri.Cn[j] = j > 0 ? M[j - 1][j] : T(0);
  }
  return true;
}

/// L maps span{y_0..y_k} into itself (A_k = 0): rebuild that block. A zero
/// pivot depends on the starting basis, so on failure the start is sheared
/// by y_j <- y_j + s y_{j-1} for a few s before giving up.
template <class T>
bool rebuild_invariant_block(const TDOperator<T>& L, Tridiagonalization<T>& tri, int k) {
  const std::vector<Polynomial<T>> start(tri.y.begin(), tri.y.begin() + k + 1);
  for (long s = 0; s <= 6; ++s) {
    auto basis = start;
    for (int j = k; j >= 1 && s != 0; --j) {
      basis[static_cast<std::size_t>(j)] += basis[static_cast<std::size_t>(j) - 1] * T(s * (j % 2 ? 1 : -1));
    }
    if (eliminate_block(L, tri, basis)) return true;
  }
  return false;
}

}  // namespace detail

/// Constructive tridiagonalization with the canonical free parameters:
/// y_{k+1} has no x^k and no x^(k-1) term, so B_k = coeff_k(L y_k) and
/// C_k = coeff_{k-1}(L y_k) - B_k coeff_{k-1}(y_k). The remaining coefficients
/// of y_{k+1} follow from A_k c_p = coeff_p(L y_k) - B_k coeff_p(y_k) - C_k coeff_p(y_{k-1});
/// when A_k = 0 they are set to zero. If A_k = 0 and those equations are then
/// inconsistent, the basis y_0..y_k is rebuilt (see rebuild_invariant_block).
template <class T>
Tridiagonalization<T> tridiagonalize(const TDOperator<T>& L, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be at least 1");
  Tridiagonalization<T> out;
  out.y.push_back(Polynomial<T>{T(1)});
  for (int k = 0; k < n_max; ++k) {
    const Polynomial<T>& yk = out.y[static_cast<std::size_t>(k)];
    const Polynomial<T> prev = k > 0 ? out.y[static_cast<std::size_t>(k - 1)] : Polynomial<T>{};
    const Polynomial<T> r = L(yk);
    T Ak = r.coeff(k + 1);
    T Bk = r.coeff(k);
    T Ck = k > 0 ? r.coeff(k - 1) - Bk * yk.coeff(k - 1) : T(0);

    std::vector<T> c(static_cast<std::size_t>(k) + 2, T(0));
    c.back() = T(1);
    const double scale = detail::max_abs(r);
    bool defective = false;
    for (int p = 0; p <= k - 2; ++p) {
      T rhs = r.coeff(p) - Bk * yk.coeff(p) - Ck * prev.coeff(p);
      if (!is_zero(Ak)) {
        c[static_cast<std::size_t>(p)] = rhs / Ak;
      } else if (!detail::negligible(rhs, scale)) {
        defective = true;
      }
    }
    out.An.push_back(std::move(Ak));
    out.Bn.push_back(std::move(Bk));
    out.Cn.push_back(std::move(Ck));
    out.y.emplace_back(std::move(c));
    if (defective) {
      if (detail::rebuild_invariant_block(L, out, k)) {
        out.repaired_rows.push_back(k);
      } else {
        out.defective_rows.push_back(k);
      }
    }
  }
  return out;
}

/// L y_n - (A_n y_{n+1} + B_n y_n + C_n y_{n-1}) for row n.
template <class T>
Polynomial<T> relation_residual(const TDOperator<T>& L, const Tridiagonalization<T>& tri, int n) {
  const auto& y = tri.y;
  const auto i = static_cast<std::size_t>(n);
  Polynomial<T> rhs = y[i + 1] * tri.An[i] + y[i] * tri.Bn[i];
  if (n > 0) rhs += y[i - 1] * tri.Cn[i];
  return L(y[i]) - rhs;
}

/// Bilinear pairing on polynomials, e.g. from moments or a quadrature rule.
template <class T>
using InnerProduct = std::function<T(const Polynomial<T>&, const Polynomial<T>&)>;

/// <p, q> = sum_{i,j} p_i q_j mu_{i+j}.
template <class T>
InnerProduct<T> moment_inner_product(std::vector<T> moments) {
  return [mu = std::move(moments)](const Polynomial<T>& p, const Polynomial<T>& q) {
    T acc(0);
    if (p.degree() + q.degree() >= static_cast<int>(mu.size())) {
      throw Error(ErrorCode::InvalidArgument, "moment sequence too short for requested degree");
    }
    for (int i = 0; i <= p.degree(); ++i) {
      if (is_zero(p.coeffs()[static_cast<std::size_t>(i)])) continue;
      for (int j = 0; j <= q.degree(); ++j) {
        acc += p.coeffs()[static_cast<std::size_t>(i)] * q.coeffs()[static_cast<std::size_t>(j)] *
               mu[static_cast<std::size_t>(i + j)];
      }
    }
    return acc;
  };
}


/// Gram-Schmidt on the y_n of a tridiagonalization, returning monic orthogonal
/// r_n with their recomputed three-term coefficients. `off_band` records the
/// largest coefficient of L r_n outside the band, which vanishes when L is
/// symmetric for the supplied pairing.
template <class T>
Tridiagonalization<T> orthogonalize(const Tridiagonalization<T>& tri, const InnerProduct<T>& ip) {
  const int n_max = tri.rows();
  Tridiagonalization<T> out;
  std::vector<T> norms;
  for (int n = 0; n <= n_max; ++n) {
    Polynomial<T> r = tri.y[static_cast<std::size_t>(n)];
    const T y_norm = ip(r, r);
    for (int k = 0; k < n; ++k) {
      const auto& rk = out.y[static_cast<std::size_t>(k)];
      T proj = ip(r, rk) / norms[static_cast<std::size_t>(k)];
      if (!is_zero(proj)) r -= rk * proj;
    }
    T nn = ip(r, r);
    bool singular = false;
    if constexpr (is_exact_v<T>) {
      singular = sign_of(nn) <= 0;
    } else {
      // Condition estimate |y_n| / |r_n| beyond 1e12 means the pairing is
      // numerically degenerate on this basis.
      singular = !(to_double(nn) > 1e-24 * std::abs(to_double(y_norm)));
    }
    if (singular) throw IndexedError(ErrorCode::SingularGram, "Gram matrix is not positive definite", n);
    norms.push_back(nn);
    out.y.push_back(std::move(r));
  }

  // L r_n assembled from the rows of the original relation.
  for (int n = 0; n < n_max; ++n) {
    auto coef = detail::expand_in_basis(out.y[static_cast<std::size_t>(n)], tri.y);
    Polynomial<T> image;
    for (int j = 0; j <= n; ++j) {
      const auto& cj = coef[static_cast<std::size_t>(j)];
      if (is_zero(cj)) continue;
      const auto jj = static_cast<std::size_t>(j);
      Polynomial<T> lyj = tri.y[jj + 1] * tri.An[jj] + tri.y[jj] * tri.Bn[jj];
      if (j > 0) lyj += tri.y[jj - 1] * tri.Cn[jj];
      image += lyj * cj;
    }
    auto in_r = detail::expand_in_basis(image, out.y);
    const auto i = static_cast<std::size_t>(n);
    out.An.push_back(in_r[i + 1]);
    out.Bn.push_back(in_r[i]);
    out.Cn.push_back(n > 0 ? in_r[i - 1] : T(0));
    for (int j = 0; j + 1 < n; ++j) out.off_band = std::max(out.off_band, std::abs(to_double(in_r[static_cast<std::size_t>(j)])));
  }
  return out;
}

/// Symmetric three-term data L yhat_n = a_n yhat_{n+1} + b_n yhat_n + a_{n-1} yhat_{n-1}
/// with yhat_n = y_n / basis_norms[n].
struct SymmetricTridiag {
  std::vector<double> a;            ///< off-diagonal, size rows-1
  std::vector<double> b;            ///< diagonal, size rows
  std::vector<double> basis_norms;  ///< positive, basis_norms[0] = 1
};

/// Diagonal similarity to symmetric form. Requires A_n C_{n+1} > 0; with
/// positive norms a_n carries the sign of A_n.
template <class T>
SymmetricTridiag symmetrize(const Tridiagonalization<T>& tri) {
  SymmetricTridiag out;
  const int rows = tri.rows();
  if (rows == 0) return out;
  out.basis_norms.push_back(1.0);
  for (int n = 0; n < rows; ++n) {
    out.b.push_back(to_double(tri.Bn[static_cast<std::size_t>(n)]));
    if (n + 1 >= rows) break;
    const T prod = tri.An[static_cast<std::size_t>(n)] * tri.Cn[static_cast<std::size_t>(n) + 1];
    if (!(sign_of(prod) > 0)) {
      throw IndexedError(ErrorCode::NotSymmetrizable, "A_n C_{n+1} must be positive", n);
    }
    const double An = to_double(tri.An[static_cast<std::size_t>(n)]);
    const double Cn1 = to_double(tri.Cn[static_cast<std::size_t>(n) + 1]);
    out.basis_norms.push_back(out.basis_norms.back() * std::sqrt(Cn1 / An));
    out.a.push_back((An > 0 ? 1.0 : -1.0) * std::sqrt(to_double(prod)));
  }
  return out;
}

/// The operator D with D 1 = 0 and D x^n = sum_{k<n} (-1)^k X^k L x^{n-1-k},
/// stored through its images of 1, x, ..., x^{n_max}.
template <class T>
struct AnticommutatorRoot {
  std::vector<Polynomial<T>> images;

  Polynomial<T> operator()(const Polynomial<T>& p) const {
    if (p.degree() >= static_cast<int>(images.size())) {
      throw Error(ErrorCode::InvalidArgument, "polynomial degree exceeds reconstructed range");
    }
    Polynomial<T> out;
    for (int k = 0; k <= p.degree(); ++k) {
      const auto& c = p.coeffs()[static_cast<std::size_t>(k)];
      if (!is_zero(c)) out += images[static_cast<std::size_t>(k)] * c;
    }
    return out;
  }
};

template <class T>
AnticommutatorRoot<T> reconstruct_D(const TDOperator<T>& L, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be at least 1");
  std::vector<Polynomial<T>> L_mono;
  for (int j = 0; j < n_max; ++j) L_mono.push_back(L(Polynomial<T>::monomial(j, T(1))));
  AnticommutatorRoot<T> D;
  D.images.emplace_back();
  for (int n = 1; n <= n_max; ++n) {
    Polynomial<T> acc;
    for (int k = 0; k < n; ++k) {
      Polynomial<T> term = L_mono[static_cast<std::size_t>(n - 1 - k)].shifted_up(k);
      if (k % 2) acc -= term; else acc += term;
    }
    D.images.push_back(std::move(acc));
  }
  return D;
}

// ---------------------------------------------------------------------------
// Symmetry weight: (ln w)' = (B - A')/A by partial fractions.

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

template <class T>
struct Pole {
  T location;
  T residue;
};

template <class T>
struct WeightSpec {
  std::vector<Pole<T>> poles;   ///< sorted by location
  Polynomial<T> polynomial_part;  ///< quotient of (B - A') by A
  Interval interval;
  double normalization_point = 0.0;
};

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  if (n > mpz_class("1000000000000")) {
    throw Error(ErrorCode::UnsupportedPoles, "coefficients too large for rational root search");
  }
  unsigned long v = n.get_ui();
  std::vector<mpz_class> out;
  for (unsigned long d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      out.emplace_back(d);
      if (d != v / d) out.emplace_back(v / d);
    }
  }
  return out;
}

/// Roots of a rational polynomial, which must split over Q into distinct
/// linear factors.
inline std::vector<Rational> real_simple_roots(Polynomial<Rational> p) {
  std::vector<Rational> roots;
  while (p.degree() >= 1) {
    if (p.coeff(0).is_zero()) {
      roots.emplace_back(0);
      p = divmod(p, Polynomial<Rational>{Rational(0), Rational(1)}).first;
      continue;
    }
    mpz_class lcm = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.raw().get_den_mpz_t());
    std::vector<mpz_class> ints;
    for (const auto& c : p.coeffs()) ints.emplace_back(mpz_class(c.raw() * lcm));
    std::optional<Rational> found;
    for (const auto& num : divisors(ints.front())) {
      for (const auto& den : divisors(ints.back())) {
        for (int s : {1, -1}) {
          Rational cand(mpq_class(mpz_class(s * num), den));
          if (p(cand).is_zero()) {
            found = cand;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) throw Error(ErrorCode::UnsupportedPoles, "A does not split into rational linear factors");
    roots.push_back(*found);
    p = divmod(p, Polynomial<Rational>{-*found, Rational(1)}).first;
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (roots[i] == roots[i - 1]) throw Error(ErrorCode::UnsupportedMultiplePole, "A has a repeated root");
  }
  return roots;
}

/// Real roots of a polynomial of degree <= 3 (Durand-Kerner plus Newton
/// polish). Non-real or repeated roots are rejected.
inline std::vector<double> real_simple_roots(const Polynomial<double>& p) {
  const int d = p.degree();
  std::vector<double> roots;
  if (d < 1) return roots;
  using cd = std::complex<double>;
  const double lead = p.leading();
  auto monic = [&](cd z) {
    cd acc = 1.0;
    for (int k = d - 1; k >= 0; --k) acc = acc * z + p.coeffs()[static_cast<std::size_t>(k)] / lead;
    return acc;
  };
  std::vector<cd> z(static_cast<std::size_t>(d));
  double bound = 1.0;
  for (int k = 0; k < d; ++k) bound = std::max(bound, 1.0 + std::abs(p.coeffs()[static_cast<std::size_t>(k)] / lead));
  for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(i)] = std::polar(0.5 * bound, 0.4 + 2.0 * M_PI * i / d);
  for (int it = 0; it < 1000; ++it) {
    double change = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      cd den = 1.0;
      for (std::size_t j = 0; j < z.size(); ++j) if (j != i) den *= z[i] - z[j];
      cd step = monic(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * bound) break;
  }
  const double scale = bound;
  for (const auto& r : z) {
    if (std::abs(r.imag()) > 1e-8 * scale) throw Error(ErrorCode::UnsupportedPoles, "A has non-real roots");
    double x = r.real();
    const auto dp = p.derivative();
    for (int it = 0; it < 3; ++it) {
      double der = dp(x);
      if (der == 0) break;
      x -= p(x) / der;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (roots[i] - roots[i - 1] <= 1e-7 * scale) throw Error(ErrorCode::UnsupportedMultiplePole, "A has a repeated root");
  }
  return roots;
}

inline Interval default_interval(const std::vector<double>& poles) {
  if (poles.empty()) return {};
  if (poles.size() == 1) return {poles[0], std::numeric_limits<double>::infinity()};
  return {poles[0], poles[1]};
}

inline double normalization_point(const Interval& iv) {
  const bool lo_fin = std::isfinite(iv.lo), hi_fin = std::isfinite(iv.hi);
  if (lo_fin && hi_fin) return 0.5 * (iv.lo + iv.hi);
  if (lo_fin) return iv.lo + 1.0;
  if (hi_fin) return iv.hi - 1.0;
  return 0.0;
}

}  // namespace detail

/// Partial fractions of (B - A')/A for a differential TD-operator whose A has
/// simple real roots. Without an explicit interval the weight lives between
/// the two smallest poles (or right of a single pole, or on the whole line).
template <class T>
WeightSpec<T> weight_log_derivative(const TDOperator<T>& L, std::optional<Interval> interval = std::nullopt) {
  for (long k = 0; k <= 4; ++k) {
    if (!(L.first.d(k) == T(k)) || !(L.second.d(k) == T(k * (k - 1)))) {
      throw Error(ErrorCode::InvalidArgument, "weight equation needs S = d/dx and T = d^2/dx^2");
    }
  }
  if (L.A.is_zero()) throw Error(ErrorCode::InvalidArgument, "A must be nonzero");
  const Polynomial<T> numer = L.B - L.A.derivative();
  auto [quot, rem] = divmod(numer, L.A);
  WeightSpec<T> ws;
  ws.polynomial_part = std::move(quot);
  const auto dA = L.A.derivative();
  std::vector<double> locs;
  for (auto& r : detail::real_simple_roots(L.A)) {
    T res = rem(r) / dA(r);
    locs.push_back(to_double(r));
    ws.poles.push_back({std::move(r), std::move(res)});
  }
  ws.interval = interval.value_or(detail::default_interval(locs));
  if (!(ws.interval.lo < ws.interval.hi)) throw Error(ErrorCode::InvalidArgument, "empty weight interval");
  ws.normalization_point = detail::normalization_point(ws.interval);
  return ws;
}

namespace detail {

template <class T>
double log_weight_unnormalized(const WeightSpec<T>& ws, double x) {
  double acc = 0;
  for (const auto& p : ws.poles) acc += to_double(p.residue) * std::log(std::abs(x - to_double(p.location)));
  // Antiderivative of the polynomial part.
  const auto& c = ws.polynomial_part.coeffs();
  double xp = x;
  for (std::size_t k = 0; k < c.size(); ++k, xp *= x) acc += to_double(c[k]) * xp / static_cast<double>(k + 1);
  return acc;
}

}  // namespace detail

/// w(x), scaled so that w(normalization_point) = 1.
template <class T>
double eval_weight(const WeightSpec<T>& ws, double x) {
  if (!(x > ws.interval.lo && x < ws.interval.hi)) {
    throw Error(ErrorCode::OutOfDomain, "x outside the weight interval");
  }
  for (const auto& p : ws.poles) {
    if (x == to_double(p.location)) throw Error(ErrorCode::OutOfDomain, "x is a pole of the weight equation");
  }
  return std::exp(detail::log_weight_unnormalized(ws, x) -
                  detail::log_weight_unnormalized(ws, ws.normalization_point));
}

}  // namespace jmatrix
