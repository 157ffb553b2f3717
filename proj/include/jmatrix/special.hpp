#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "jmatrix/error.hpp"

namespace jmatrix {

/// log Gamma(z) for complex z: Lanczos approximation (g = 7, nine
/// coefficients) on Re z >= 1/2, reflection formula elsewhere. The imaginary
/// part is a branch of arg Gamma and is not continuous in z; callers needing
/// |Gamma| should use the real part only.
inline std::complex<double> log_gamma(std::complex<double> z) {
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  const double pi = std::numbers::pi;
  if (z.real() < 0.5) {
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> x = p[0];
  for (std::size_t i = 1; i < p.size(); ++i) x += p[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + g + 0.5;
  return 0.5 * std::log(2 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// log |Gamma(z)|.
inline double log_abs_gamma(std::complex<double> z) { return log_gamma(z).real(); }

/// Rising factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1.
template <class T>
T pochhammer(const T& x, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "Pochhammer symbol with negative length");
  T acc(1);
  for (int i = 0; i < n; ++i) acc *= x + T(i);
  return acc;
}

/// n! as a double.
inline double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace jmatrix
