#pragma once

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "jmatrix/error.hpp"

namespace jmatrix {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : v_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p/q", an integer, or a decimal literal such as "-2.25" or "1e-3".
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return v_; }

  double to_double() const { return v_.get_d(); }
  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }
  std::string numerator() const { return v_.get_num().get_str(); }
  std::string denominator() const { return v_.get_den().get_str(); }

  /// Largest integer not exceeding the value.
  long floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    if (!q.fits_slong_p()) throw Error(ErrorCode::InvalidArgument, "floor exceeds long range");
    return q.get_si();
  }

  /// "p/q", or "p" when the denominator is one.
  std::string str() const { return v_.get_str(); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_{0};
};

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&] { throw Error(ErrorCode::Parse, "not a rational literal: '" + std::string(text) + "'"); };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse(text.substr(0, slash));
    Rational den = parse(text.substr(slash + 1));
    if (!num.is_integer() || !den.is_integer()) fail();
    if (den.is_zero()) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail();
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') fail();
    std::string exp_text(text.substr(i + 1));
    if (exp_text.empty()) fail();
    char* end = nullptr;
    exponent = std::strtol(exp_text.c_str(), &end, 10);
    if (*end != '\0') fail();
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exponent - scale;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  mpq_class q = shift < 0 ? mpq_class(num, pow10) : mpq_class(num * pow10);
  return Rational(std::move(q));
}

/// Decimal or "p/q" literal to the nearest double. Decimals go through
/// strtod so "0.1" rounds correctly instead of truncating.
inline double parse_double(std::string_view text) {
  (void)Rational::parse(text);  // syntax check
  std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    return std::strtod(s.substr(0, slash).c_str(), nullptr) / std::strtod(s.substr(slash + 1).c_str(), nullptr);
  }
  return std::strtod(s.c_str(), nullptr);
}

// Field helpers shared by the templated algorithms. Overloaded for double and
// Rational so generic code can be written once for both scalar modes.

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.to_double(); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return x.is_zero(); }

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

inline int sign_of(double x) { return (x > 0) - (x < 0); }
inline int sign_of(const Rational& x) { return x.sign(); }

/// Build num/den in the scalar type T.
template <class T>
T ratio(long num, long den) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(num, den);
  } else {
    return static_cast<T>(num) / static_cast<T>(den);
  }
}

/// Convert a double to T: exact binary value for Rational.
template <class T>
T from_double(double x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(mpq_class(x));
  } else {
    return static_cast<T>(x);
  }
}

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

}  // namespace jmatrix
