#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jmatrix/format.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/scalar.hpp"

namespace jmatrix {

/// Comma-separated ascending coefficients, rationals as "p/q":
/// "0,0,0,1" is x^3 and "1/2,-3" is 1/2 - 3x. An empty string is the zero
/// polynomial.
template <class T>
Polynomial<T> parse_polynomial(std::string_view text) {
  std::vector<T> coeffs;
  if (text.find_first_not_of(" \t") == std::string_view::npos) return {};
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if constexpr (std::is_same_v<T, Rational>) {
      coeffs.push_back(Rational::parse(item));
    } else {
      coeffs.push_back(static_cast<T>(parse_double(item)));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Polynomial<T>(std::move(coeffs));
}

inline Polynomial<Scalar> parse_polynomial(std::string_view text, Mode mode) {
  if (mode == Mode::Exact) {
    auto p = parse_polynomial<Rational>(text);
    return convert<Scalar>(p, [](const Rational& r) { return Scalar(r); });
  }
  auto p = parse_polynomial<double>(text);
  return convert<Scalar>(p, [](double v) { return Scalar(v); });
}

inline std::string scalar_text(const Rational& r) { return r.str(); }
inline std::string scalar_text(double v) { return format_double(v); }
inline std::string scalar_text(const Scalar& s) { return s.str(); }

template <class T>
std::string format_polynomial(const Polynomial<T>& p) {
  std::string out;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i) out += ',';
    out += scalar_text(p.coeffs()[i]);
  }
  return out;
}

}  // namespace jmatrix
