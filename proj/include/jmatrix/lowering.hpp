#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "jmatrix/error.hpp"
#include "jmatrix/polynomial.hpp"

namespace jmatrix {

/// Linear operator on polynomials acting on monomials as x^k -> d(k) x^(k-shift).
///
/// The sequence d is supplied as a generator and memoized on first use. The
/// defining constraint (d(k) = 0 for k < shift, d(k) != 0 for k >= shift) is
/// checked lazily for every index that is actually requested. Copies share the
/// cache; concurrent readers are safe and fills are idempotent.
template <class T>
class DegreeLoweringOperator {
 public:
  using Generator = std::function<T(long)>;

  DegreeLoweringOperator(int shift, Generator gen, std::string label)
      : shift_(shift), label_(std::move(label)), state_(std::make_shared<State>(std::move(gen))) {
    if (shift < 1) throw Error(ErrorCode::InvalidArgument, "lowering shift must be positive");
  }

  int shift() const { return shift_; }
  const std::string& label() const { return label_; }

  /// d(k), validated against the shift constraint.
  T d(long k) const {
    {
      std::shared_lock lock(state_->mutex);
      if (k < static_cast<long>(state_->cache.size())) return state_->cache[static_cast<std::size_t>(k)];
    }
    std::unique_lock lock(state_->mutex);
    auto& cache = state_->cache;
    while (static_cast<long>(cache.size()) <= k) {
      const long idx = static_cast<long>(cache.size());
      T v = state_->gen(idx);
      const bool zero = is_zero(v);
      if (idx < shift_ && !zero) {
        throw IndexedError(ErrorCode::InvalidArgument, label_ + ": d(k) must vanish below the shift", idx);
      }
      if (idx >= shift_ && zero) {
        throw IndexedError(ErrorCode::InvalidArgument, label_ + ": d(k) must be nonzero from the shift on", idx);
      }
      cache.push_back(std::move(v));
    }
    return cache[static_cast<std::size_t>(k)];
  }

  Polynomial<T> operator()(const Polynomial<T>& p) const {
    if (p.degree() < shift_) return {};
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(p.degree() - shift_ + 1));
    for (int k = shift_; k <= p.degree(); ++k) out.push_back(p.coeffs()[static_cast<std::size_t>(k)] * d(k));
    return Polynomial<T>(std::move(out));
  }

 private:
  struct State {
    explicit State(Generator g) : gen(std::move(g)) {}
    Generator gen;
    std::vector<T> cache;
    std::shared_mutex mutex;
  };

  int shift_;
  std::string label_;
  std::shared_ptr<State> state_;
};

template <class T>
Polynomial<T> apply_lowering(const DegreeLoweringOperator<T>& op, const Polynomial<T>& p) {
  return op(p);
}

/// d/dx: d_k = k.
template <class T>
DegreeLoweringOperator<T> derivative_op() {
  return {1, [](long k) { return T(k); }, "d/dx"};
}

/// d^2/dx^2: d'_k = k(k-1).
template <class T>
DegreeLoweringOperator<T> second_derivative_op() {
  return {2, [](long k) { return T(k * (k - 1)); }, "d2/dx2"};
}

/// q-derivative: d_k = (1 - q^k)/(1 - q) = 1 + q + ... + q^(k-1).
///
/// Rational q must avoid 0 and the real roots of unity +-1, otherwise some
/// d_k vanishes.
template <class T>
DegreeLoweringOperator<T> q_derivative_op(T q) {
  if (is_zero(q) || q == T(1) || q == T(-1)) {
    throw Error(ErrorCode::InvalidArgument, "q-derivative needs q not in {0, 1, -1}");
  }
  return {1,
          [q](long k) {
            T sum(0), pow(1);
            for (long i = 0; i < k; ++i) {
              sum += pow;
              pow *= q;
            }
            return sum;
          },
          "D_q"};
}

/// Square of the q-derivative: d'_k = d_k d_{k-1}.
template <class T>
DegreeLoweringOperator<T> q_second_derivative_op(T q) {
  auto first = q_derivative_op<T>(q);
  return {2, [first](long k) { return k < 2 ? T(0) : first.d(k) * first.d(k - 1); }, "D_q^2"};
}

}  // namespace jmatrix
