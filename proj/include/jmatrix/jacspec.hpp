#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "jmatrix/error.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/rational.hpp"
#include "jmatrix/tdop.hpp"

namespace jmatrix {

/// Symmetric tridiagonal operator: J e_n = a_n e_{n+1} + b_n e_n + a_{n-1} e_{n-1}.
/// The entries come from generators so unbounded operators can be scanned
/// lazily; `length` is empty for an unbounded operator.
template <class T>
struct JacobiOperator {
  std::function<T(long)> a;
  std::function<T(long)> b;
  std::optional<long> length;

  static JacobiOperator finite(std::vector<T> off, std::vector<T> diag) {
    if (off.size() + 1 < diag.size()) throw Error(ErrorCode::InvalidArgument, "off-diagonal too short");
    const long n = static_cast<long>(diag.size());
    return {[off = std::move(off)](long i) { return off.at(static_cast<std::size_t>(i)); },
            [diag = std::move(diag)](long i) { return diag.at(static_cast<std::size_t>(i)); }, n};
  }
};

/// Invariant blocks (n_{i-1}, n_i] between zeros of the off-diagonal.
struct BlockDecomposition {
  std::vector<long> boundaries;                 ///< starts with -1
  std::vector<std::pair<long, long>> blocks;    ///< inclusive index ranges
  std::optional<long> tail_start;               ///< unbounded remainder from here
  long scan_to = 0;
};

template <class T>
BlockDecomposition split_blocks(const JacobiOperator<T>& J, long scan_to, double tol = 1e-12) {
  if (scan_to < 1) throw Error(ErrorCode::InvalidArgument, "scan_to must be positive");
  const long limit = J.length ? std::min(*J.length, scan_to) : scan_to;
  BlockDecomposition out;
  out.scan_to = limit;
  out.boundaries.push_back(-1);
  long start = 0;
  for (long n = 0; n < limit; ++n) {
    const bool last_row = J.length && n == *J.length - 1;
    bool zero = last_row;
    if (!last_row) {
      const T an = J.a(n);
      if constexpr (is_exact_v<T>) {
        zero = is_zero(an);
      } else {
        const double scale = std::max({1.0, std::abs(to_double(J.b(n))), std::abs(to_double(J.b(n + 1)))});
        zero = std::abs(to_double(an)) <= tol * scale;
      }
    }
    if (zero) {
      if (!last_row) out.boundaries.push_back(n);
      out.blocks.emplace_back(start, n);
      start = n + 1;
    }
  }
  if (start < limit) out.tail_start = start;
  return out;
}

/// Eigen-decomposition of one finite block.
struct SpectrumResult {
  std::pair<long, long> block;
  std::vector<double> eigenvalues;           ///< ascending
  std::vector<std::vector<double>> vectors;  ///< vectors[i] belongs to eigenvalues[i]
  int block_index = 0;
};

namespace detail {

/// Implicit QL for a symmetric tridiagonal matrix (diagonal d, off-diagonal
/// e with e[i] coupling i and i+1). On return d holds the eigenvalues in
/// ascending order and z the eigenvectors as columns.
inline void tql2(std::vector<double>& d, std::vector<double> e, std::vector<std::vector<double>>& z) {
  const std::size_t n = d.size();
  z.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) z[i][i] = 1.0;
  if (n <= 1) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const long cap = 30 * static_cast<long>(n);
  long iterations = 0;
  double f = 0.0, tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;
    if (m > l) {
      do {
        if (++iterations > cap) throw Error(ErrorCode::NotConverged, "tridiagonal QL iteration cap reached");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = z[k][ii + 1];
            z[k][ii + 1] = s * z[k][ii] + c * h;
            z[k][ii] = c * z[k][ii] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
  // Selection sort keeps eigenvector columns attached.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t k = i;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d[j] < d[k]) k = j;
    }
    if (k != i) {
      std::swap(d[i], d[k]);
      for (std::size_t r = 0; r < n; ++r) std::swap(z[r][i], z[r][k]);
    }
  }
}

}  // namespace detail

/// Eigenvalues and orthonormal eigenvectors of a symmetric tridiagonal matrix.
inline SpectrumResult eig_symmetric_tridiagonal(std::vector<double> diag, const std::vector<double>& off) {
  SpectrumResult out;
  std::vector<std::vector<double>> z;
  detail::tql2(diag, off, z);
  const std::size_t n = diag.size();
  out.eigenvalues = diag;
  out.vectors.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < n; ++r) out.vectors[i][r] = z[r][i];
    // Sign convention: first nonzero component positive.
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(out.vectors[i][r]) > 1e-14) {
        if (out.vectors[i][r] < 0) {
          for (auto& v : out.vectors[i]) v = -v;
        }
        break;
      }
    }
  }
  out.block = {0, static_cast<long>(n) - 1};
  return out;
}

/// Spectrum of the finite block [start, end] of J. The spectrum of an
/// unreduced Jacobi block is simple; a gap below 1e-12 of the spectral scale
/// is reported as NOT_SIMPLE.
template <class T>
SpectrumResult eig_block(const JacobiOperator<T>& J, std::pair<long, long> block, int block_index = 0) {
  const auto [s, e] = block;
  if (s < 0 || e < s || (J.length && e >= *J.length)) throw Error(ErrorCode::InvalidArgument, "invalid block range");
  std::vector<double> diag, off;
  for (long n = s; n <= e; ++n) {
    diag.push_back(to_double(J.b(n)));
    if (n < e) off.push_back(to_double(J.a(n)));
  }
  auto out = eig_symmetric_tridiagonal(std::move(diag), off);
  out.block = block;
  out.block_index = block_index;
  double scale = 1.0;
  for (double v : out.eigenvalues) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 1; i < out.eigenvalues.size(); ++i) {
    if (out.eigenvalues[i] - out.eigenvalues[i - 1] <= 1e-12 * scale) {
      throw Error(ErrorCode::NotSimple, "block spectrum is not simple");
    }
  }
  return out;
}

/// p_0..p_{n_max} at z from a_n p_{n+1} = (z - b_n) p_n - a_{n-1} p_{n-1}, p_0 = 1.
template <class T>
std::vector<double> eval_pn(const JacobiOperator<T>& J, double z, long n_max) {
  std::vector<double> p{1.0};
  double prev = 0.0, prev_a = 0.0;
  for (long n = 0; n < n_max; ++n) {
    const double an = to_double(J.a(n));
    if (an == 0.0) throw IndexedError(ErrorCode::RecurrenceBreakdown, "off-diagonal vanishes", n);
    const double next = ((z - to_double(J.b(n))) * p.back() - prev_a * prev) / an;
    prev = p.back();
    prev_a = an;
    p.push_back(next);
  }
  return p;
}

/// log|p_n| and sign, for degrees where p_n overflows a double.
struct ScaledValue {
  double log_abs;
  int sign;
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

template <class T>
std::vector<ScaledValue> eval_pn_log(const JacobiOperator<T>& J, double z, long n_max) {
  std::vector<ScaledValue> out{{0.0, 1}};
  // Pair (prev, cur) is stored relative to exp(shift).
  double prev = 0.0, cur = 1.0, shift = 0.0, prev_a = 0.0;
  for (long n = 0; n < n_max; ++n) {
    const double an = to_double(J.a(n));
    if (an == 0.0) throw IndexedError(ErrorCode::RecurrenceBreakdown, "off-diagonal vanishes", n);
    double next = ((z - to_double(J.b(n))) * cur - prev_a * prev) / an;
    prev = cur;
    cur = next;
    prev_a = an;
    const double m = std::max(std::abs(prev), std::abs(cur));
    if (m > 1e100 || (m < 1e-100 && m > 0)) {
      prev /= m;
      cur /= m;
      shift += std::log(m);
    }
    out.push_back(cur == 0.0 ? ScaledValue{-std::numeric_limits<double>::infinity(), 0}
                             : ScaledValue{std::log(std::abs(cur)) + shift, cur > 0 ? 1 : -1});
  }
  return out;
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double total_mass = 0.0;
};

/// Gauss rule from the n x n truncation: nodes are its eigenvalues, weights
/// total_mass times the squared first eigenvector components.
template <class T>
QuadratureRule golub_welsch(const JacobiOperator<T>& J, int n, double total_mass) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "rule size must be positive");
  std::vector<double> diag, off;
  for (long i = 0; i < n; ++i) {
    diag.push_back(to_double(J.b(i)));
    if (i + 1 < n) {
      const double a = to_double(J.a(i));
      if (!(a > 0)) throw IndexedError(ErrorCode::InvalidArgument, "Golub-Welsch needs positive off-diagonals", i);
      off.push_back(a);
    }
  }
  auto spec = eig_symmetric_tridiagonal(std::move(diag), off);
  QuadratureRule rule;
  rule.total_mass = total_mass;
  rule.nodes = spec.eigenvalues;
  // v_0^2 = 1 / sum_k p_k(x)^2 for the normalized eigenvector; the Christoffel
  // form keeps relative accuracy for the small outer weights.
  for (double x : rule.nodes) {
    auto p = eval_pn_log(J, x, n - 1);
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& v : p) top = std::max(top, 2 * v.log_abs);
    double sum = 0.0;
    for (const auto& v : p) sum += std::exp(2 * v.log_abs - top);
    rule.weights.push_back(total_mass * std::exp(-top) / sum);
  }
  return rule;
}

template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

/// Pairing <p, q> = sum_i w_i p(x_i) q(x_i), for orthogonalize.
inline InnerProduct<double> quadrature_inner_product(QuadratureRule rule) {
  return [rule = std::move(rule)](const Polynomial<double>& p, const Polynomial<double>& q) {
    return integrate(rule, [&](double x) { return p(x) * q(x); });
  };
}

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;  ///< integral of |f|, the scale for relative tolerances
  int intervals = 0;
  double truncation = std::numeric_limits<double>::infinity();  ///< half-line cut point
};

namespace detail {

struct GKSegment {
  double lo, hi, value, error, abs_value;
  bool operator<(const GKSegment& o) const { return error < o.error; }
};

template <class F>
GKSegment gauss_kronrod15(F& f, double lo, double hi) {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  const double fc = f(c);
  double kron = wgk[7] * fc, gauss = wg[3] * fc, kabs = wgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double x = h * xgk[static_cast<std::size_t>(j)];
    const double f1 = f(c - x), f2 = f(c + x);
    kron += wgk[static_cast<std::size_t>(j)] * (f1 + f2);
    kabs += wgk[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += wg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  return {lo, hi, kron * h, std::abs((kron - gauss) * h), kabs * std::abs(h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval. Stops when the
/// summed error estimate is below max(abs_tol, rtol * integral of |f|).
template <class F>
IntegrationResult integrate_adaptive(F&& f, double lo, double hi, double rtol = 1e-10, double abs_tol = 1e-300,
                                     int max_intervals = 4000) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "integration needs lo < hi");
  std::priority_queue<detail::GKSegment> heap;
  auto first = detail::gauss_kronrod15(f, lo, hi);
  double value = first.value, error = first.error, abs_value = first.abs_value;
  heap.push(first);
  while (error > std::max(abs_tol, rtol * abs_value)) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      throw Error(ErrorCode::NotConverged, "adaptive quadrature exceeded its interval budget");
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    auto left = detail::gauss_kronrod15(f, worst.lo, mid);
    auto right = detail::gauss_kronrod15(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated update round-off.
  IntegrationResult out;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().error;
    out.abs_value += heap.top().abs_value;
    heap.pop();
  }
  return out;
}

struct HalfLineOptions {
  double rtol = 1e-10;
  /// Fixed cut point; found from the envelope when empty.
  std::optional<double> truncation;
  /// Decay envelope of the integrand; |f| is used when empty.
  std::function<double(double)> envelope;
};

/// Integral over (lo, infinity) of a rapidly decaying integrand. The range is
/// cut at T where the envelope has fallen below 1e-16 of its sampled peak;
/// the piece over [T, 2T] must then be negligible, otherwise NOT_CONVERGED.
template <class F>
IntegrationResult integrate_half_line(F&& f, double lo, const HalfLineOptions& opts = {}) {
  auto env = [&](double x) { return opts.envelope ? std::abs(opts.envelope(x)) : std::abs(f(x)); };
  double T = 0.0;
  if (opts.truncation) {
    T = *opts.truncation;
  } else {
    double peak = 0.0, step = 1.0 / 64;
    double x = lo;
    T = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 20000; ++i) {
      x += step;
      const double v = env(x);
      peak = std::max(peak, v);
      if (peak > 0 && v < 1e-16 * peak && env(1.5 * x - 0.5 * lo) < 1e-16 * peak) {
        T = x;
        break;
      }
      step *= 1.01;
    }
    if (std::isnan(T)) throw Error(ErrorCode::NotConverged, "integrand envelope does not decay");
  }
  auto out = integrate_adaptive(f, lo, T, opts.rtol);
  auto tail = integrate_adaptive(f, T, 2 * T - lo, opts.rtol, 1e-300 + opts.rtol * out.abs_value);
  if (tail.abs_value > opts.rtol * out.abs_value) {
    throw Error(ErrorCode::NotConverged, "half-line tail beyond the truncation point is not negligible");
  }
  out.truncation = T;
  return out;
}

/// Heuristic self-adjointness indicator: for s_n^{+-} = a_n + a_{n-1} +- b_n,
/// a branch bounded from above suggests essential self-adjointness. Never a
/// proof, and NONE never means "not self-adjoint".
struct BerezanskiiResult {
  int sign = 0;  ///< +1, -1, or 0 for NONE
  std::vector<double> s_plus, s_minus;
  /// Least-squares fit s_n ~ c n^2 + d + e / n^2 over [n_max/5, n_max].
  std::array<double, 3> fit_plus{}, fit_minus{};
  bool bounded_plus = false, bounded_minus = false;
  static constexpr bool heuristic = true;
};

namespace detail {

inline std::array<double, 3> fit_quadratic_tail(const std::vector<double>& s, long from, long to) {
  const long rows = to - from + 1;
  Eigen::MatrixXd X(rows, 3);
  Eigen::VectorXd y(rows);
  for (long n = from; n <= to; ++n) {
    const double nn = static_cast<double>(n);
    X(n - from, 0) = nn * nn;
    X(n - from, 1) = 1.0;
    X(n - from, 2) = 1.0 / (nn * nn);
    y(n - from) = s[static_cast<std::size_t>(n)];
  }
  Eigen::Vector3d c = X.colPivHouseholderQr().solve(y);
  return {c(0), c(1), c(2)};
}

/// Bounded when the n^2 coefficient is negative; when it is negligible, when
/// the second half never exceeds the running max of the first half.
inline bool bounded_above(const std::vector<double>& s, const std::array<double, 3>& fit, long n_max) {
  double scale = 0;
  for (double v : s) scale = std::max(scale, std::abs(v));
  const double lead = fit[0] * static_cast<double>(n_max) * static_cast<double>(n_max);
  if (lead < -1e-8 * scale) return true;
  if (lead > 1e-8 * scale) return false;
  const auto half = static_cast<std::size_t>(n_max / 2);
  const double early = *std::max_element(s.begin(), s.begin() + static_cast<long>(half) + 1);
  const double late = *std::max_element(s.begin() + static_cast<long>(half), s.end());
  return late <= early + 1e-9 * std::max(1.0, scale);
}

}  // namespace detail

template <class T>
BerezanskiiResult berezanskii_test(const JacobiOperator<T>& J, long n_max) {
  if (n_max < 10) throw Error(ErrorCode::InvalidArgument, "berezanskii_test needs n_max >= 10");
  BerezanskiiResult out;
  for (long n = 0; n <= n_max; ++n) {
    const double an = to_double(J.a(n)), bn = to_double(J.b(n));
    const double prev = n > 0 ? to_double(J.a(n - 1)) : 0.0;
    out.s_plus.push_back(an + prev + bn);
    out.s_minus.push_back(an + prev - bn);
  }
  const long from = std::max(1L, n_max / 5);
  out.fit_plus = detail::fit_quadratic_tail(out.s_plus, from, n_max);
  out.fit_minus = detail::fit_quadratic_tail(out.s_minus, from, n_max);
  out.bounded_plus = detail::bounded_above(out.s_plus, out.fit_plus, n_max);
  out.bounded_minus = detail::bounded_above(out.s_minus, out.fit_minus, n_max);
  if (out.bounded_plus && out.bounded_minus) {
    out.sign = out.fit_plus[0] <= out.fit_minus[0] ? +1 : -1;
  } else if (out.bounded_plus) {
    out.sign = +1;
  } else if (out.bounded_minus) {
    out.sign = -1;
  }
  return out;
}

}  // namespace jmatrix
