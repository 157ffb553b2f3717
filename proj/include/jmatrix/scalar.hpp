#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>

#include "jmatrix/format.hpp"
#include "jmatrix/rational.hpp"

namespace jmatrix {

enum class Mode { Exact, Float };

inline std::string_view to_string(Mode m) { return m == Mode::Exact ? "EXACT" : "FLOAT"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "exact" || s == "EXACT") return Mode::Exact;
  if (s == "float" || s == "FLOAT") return Mode::Float;
  throw Error(ErrorCode::Parse, "unknown mode '" + std::string(s) + "'");
}

/// A number whose arithmetic mode is chosen at run time. Mixing an EXACT and
/// a FLOAT operand throws ModeMismatch; there is no silent promotion.
class Scalar {
 public:
  Scalar() : v_(Rational{}) {}
  Scalar(int v) : v_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational v) : v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  static Scalar parse(std::string_view text, Mode mode) {
    if (mode == Mode::Exact) return Scalar(Rational::parse(text));
    return Scalar(parse_double(text));
  }

  Mode mode() const { return std::holds_alternative<Rational>(v_) ? Mode::Exact : Mode::Float; }
  const Rational& exact() const { return std::get<Rational>(v_); }
  double value() const {
    return mode() == Mode::Exact ? exact().to_double() : std::get<double>(v_);
  }
  bool is_zero() const {
    return mode() == Mode::Exact ? exact().is_zero() : std::get<double>(v_) == 0.0;
  }
  std::string str() const;

  /// Zero in the same mode as this value.
  Scalar zero() const { return mode() == Mode::Exact ? Scalar(Rational{}) : Scalar(0.0); }

  Scalar operator-() const {
    if (mode() == Mode::Exact) return Scalar(-exact());
    return Scalar(-std::get<double>(v_));
  }
  Scalar& operator+=(const Scalar& o) { return combine(o, [](auto& a, const auto& b) { a += b; }); }
  Scalar& operator-=(const Scalar& o) { return combine(o, [](auto& a, const auto& b) { a -= b; }); }
  Scalar& operator*=(const Scalar& o) { return combine(o, [](auto& a, const auto& b) { a *= b; }); }
  Scalar& operator/=(const Scalar& o) { return combine(o, [](auto& a, const auto& b) { a /= b; }); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    a.require_same(b);
    return a.v_ == b.v_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  void require_same(const Scalar& o) const {
    if (mode() != o.mode()) {
      throw Error(ErrorCode::ModeMismatch, "arithmetic between " + std::string(to_string(mode())) +
                                               " and " + std::string(to_string(o.mode())) + " scalars");
    }
  }

  template <class F>
  Scalar& combine(const Scalar& o, F f) {
    require_same(o);
    if (mode() == Mode::Exact) {
      f(std::get<Rational>(v_), o.exact());
    } else {
      f(std::get<double>(v_), std::get<double>(o.v_));
    }
    return *this;
  }

  std::variant<Rational, double> v_;
};

inline std::string Scalar::str() const {
  return mode() == Mode::Exact ? exact().str() : format_double(std::get<double>(v_));
}

inline double to_double(const Scalar& x) { return x.value(); }
inline bool is_zero(const Scalar& x) { return x.is_zero(); }

/// Zero of the same scalar mode as `like`.
inline double zero_like(double) { return 0.0; }
inline Rational zero_like(const Rational&) { return Rational{}; }
inline Scalar zero_like(const Scalar& like) { return like.zero(); }

/// Integer k in the same scalar mode as `like`.
inline double int_like(double, long k) { return static_cast<double>(k); }
inline Rational int_like(const Rational&, long k) { return Rational(k); }
inline Scalar int_like(const Scalar& like, long k) {
  return like.mode() == Mode::Exact ? Scalar(Rational(k)) : Scalar(static_cast<double>(k));
}

}  // namespace jmatrix
