#pragma once

#include <initializer_list>
#include <vector>

#include "jmatrix/sampling.hpp"

namespace testsupport {

using jmatrix::Polynomial;
using jmatrix::Rational;
using jmatrix::sampling::random_poly;
using jmatrix::sampling::random_poly_of_degree;
using jmatrix::sampling::random_rational;
using jmatrix::sampling::random_td;
using jmatrix::sampling::strict_patterns;

/// Random polynomial of exactly the given degree.
inline Polynomial<Rational> random_poly_exact_degree(std::mt19937_64& rng, int degree) {
  return random_poly_of_degree(rng, degree);
}

inline Polynomial<Rational> poly(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return Polynomial<Rational>(std::move(v));
}

}  // namespace testsupport
