#pragma once

#include <array>
#include <random>
#include <vector>

#include "jmatrix/lowering.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/rational.hpp"
#include "jmatrix/tdop.hpp"

namespace jmatrix::sampling {

/// p/q with |p| <= num_bound and 1 <= q <= den_bound.
inline Rational random_rational(std::mt19937_64& rng, long num_bound = 5, long den_bound = 4) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound), den(1, den_bound);
  return Rational(num(rng), den(rng));
}

inline Polynomial<Rational> random_poly(std::mt19937_64& rng, int degree, long num_bound = 5, long den_bound = 4) {
  std::vector<Rational> c;
  for (int i = 0; i <= degree; ++i) c.push_back(random_rational(rng, num_bound, den_bound));
  return Polynomial<Rational>(std::move(c));
}

/// Random polynomial of exactly the given degree (-1 for zero).
inline Polynomial<Rational> random_poly_of_degree(std::mt19937_64& rng, int degree) {
  if (degree < 0) return {};
  auto p = random_poly(rng, degree);
  while (p.degree() != degree) p = random_poly(rng, degree);
  return p;
}

/// The 24 admissible (deg A, deg B, deg C) patterns of a strict TD-operator.
inline std::vector<std::array<int, 3>> strict_patterns() {
  std::vector<std::array<int, 3>> out;
  for (int c = -1; c <= 1; ++c) {
    for (int b = -1; b <= 2; ++b) out.push_back({3, b, c});
    for (int a = -1; a <= 2; ++a) out.push_back({a, 2, c});
  }
  return out;
}

/// Strict TD-operator with the given degree pattern; every third draw uses
/// q-derivatives with q = 2 instead of d/dx.
inline TDOperator<Rational> random_td(std::mt19937_64& rng, const std::array<int, 3>& pattern, int draw) {
  auto A = random_poly_of_degree(rng, pattern[0]);
  auto B = random_poly_of_degree(rng, pattern[1]);
  auto C = random_poly_of_degree(rng, pattern[2]);
  if (draw % 3 == 2) {
    return validate_td(A, B, C, q_derivative_op<Rational>(Rational(2)), q_second_derivative_op<Rational>(Rational(2)));
  }
  return differential_td(A, B, C);
}

}  // namespace jmatrix::sampling
