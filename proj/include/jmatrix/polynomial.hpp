#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jmatrix/error.hpp"
#include "jmatrix/rational.hpp"
#include "jmatrix/scalar.hpp"

namespace jmatrix {

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial has
/// no coefficients and degree -1. T is the scalar field: Rational for exact
/// identity checks, double for numerics, or Scalar when the mode is only known
/// at run time.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  /// coeff * x^k
  static Polynomial monomial(int k, T coeff) {
    std::vector<T> c(static_cast<std::size_t>(k) + 1, zero_like(coeff));
    c.back() = std::move(coeff);
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const T> coeffs() const { return c_; }

  /// Coefficient of x^p; zero outside the stored range.
  T coeff(int p) const {
    if (p < 0 || p > degree()) return c_.empty() ? T{} : zero_like(c_.front());
    return c_[static_cast<std::size_t>(p)];
  }
  const T& leading() const { return c_.back(); }

  /// Horner evaluation.
  T operator()(const T& x) const {
    if (c_.empty()) return zero_like(x);
    T acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) {
      acc *= x;
      acc += c_[i];
    }
    return acc;
  }

  Polynomial operator-() const {
    std::vector<T> c;
    c.reserve(c_.size());
    for (const auto& v : c_) c.push_back(-v);
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) {
      std::size_t old = c_.size();
      c_.resize(o.c_.size(), zero_like(o.c_.front()));
      for (std::size_t i = old; i < c_.size(); ++i) c_[i] = zero_like(o.c_[i]);
    }
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) { return *this += -o; }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, zero_like(a.c_.front() * b.c_.front()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (jmatrix::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const T& s, const Polynomial& p) { return p.scaled(s); }
  friend Polynomial operator*(const Polynomial& p, const T& s) { return p.scaled(s); }

  Polynomial scaled(const T& s) const {
    std::vector<T> c;
    c.reserve(c_.size());
    for (const auto& v : c_) c.push_back(v * s);
    return Polynomial(std::move(c));
  }

  /// Multiplication by x^k.
  Polynomial shifted_up(int k = 1) const {
    if (is_zero() || k == 0) return *this;
    std::vector<T> c(static_cast<std::size_t>(k), zero_like(c_.front()));
    c.insert(c.end(), c_.begin(), c_.end());
    return Polynomial(std::move(c));
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> c;
    c.reserve(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) {
      c.push_back(c_[k] * int_like(c_[k], static_cast<long>(k)));
    }
    return Polynomial(std::move(c));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!(a.c_[i] == b.c_[i])) return false;
    }
    return true;
  }

 private:
  void trim() {
    while (!c_.empty() && jmatrix::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

/// q(y) = p(a*y + b). Throws InvalidArgument when a is zero.
template <class T>
Polynomial<T> shift_affine(const Polynomial<T>& p, const T& a, const T& b) {
  if (is_zero(a)) throw Error(ErrorCode::InvalidArgument, "affine shift with a = 0");
  if (p.is_zero()) return {};
  Polynomial<T> lin{b, a};
  Polynomial<T> q{p.coeffs().back()};
  for (int k = p.degree() - 1; k >= 0; --k) {
    q = q * lin;
    q += Polynomial<T>{p.coeffs()[static_cast<std::size_t>(k)]};
  }
  return q;
}

/// Polynomial long division; returns {quotient, remainder}.
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> divmod(const Polynomial<T>& num, const Polynomial<T>& den) {
  if (den.is_zero()) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
  std::vector<T> rem(num.coeffs().begin(), num.coeffs().end());
  if (num.degree() < den.degree()) return {Polynomial<T>{}, num};
  std::vector<T> quot(static_cast<std::size_t>(num.degree() - den.degree() + 1), zero_like(den.leading()));
  const int dd = den.degree();
  for (int k = num.degree(); k >= dd; --k) {
    T f = rem[static_cast<std::size_t>(k)] / den.leading();
    quot[static_cast<std::size_t>(k - dd)] = f;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k - dd + j)] -= f * den.coeffs()[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(dd));
  return {Polynomial<T>(std::move(quot)), Polynomial<T>(std::move(rem))};
}

/// Coefficient-wise conversion between scalar modes.
template <class To, class From, class F>
Polynomial<To> convert(const Polynomial<From>& p, F&& f) {
  std::vector<To> c;
  c.reserve(p.coeffs().size());
  for (const auto& v : p.coeffs()) c.push_back(f(v));
  return Polynomial<To>(std::move(c));
}

inline Polynomial<double> to_float(const Polynomial<Rational>& p) {
  return convert<double>(p, [](const Rational& r) { return r.to_double(); });
}

}  // namespace jmatrix
