#pragma once

// Finite and infinite q-shifted factorials and Gaussian binomials.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "qhahn/errors.hpp"
#include "qhahn/scalar.hpp"

namespace qhahn {

/// The base q of all q-series, with 0 < |q| < 1 checked on construction.
class QValue {
 public:
  explicit QValue(Scalar q) : q_(std::move(q)) {
    if (q_.is_zero() || !(abs(q_) < 1)) throw OutOfRange("q must satisfy 0 < |q| < 1, got " + q_.to_string(10));
  }
  const Scalar& value() const { return q_; }
  long prec() const { return q_.prec(); }
  operator const Scalar&() const { return q_; }

 private:
  Scalar q_;
};

/// Truncation control for infinite products and sums: stop once the tail is
/// bounded by `eps` (absolute), give up after `max_terms` factors/terms.
struct TailConfig {
  Scalar eps;
  std::size_t max_terms = 10000;

  TailConfig(Scalar e, std::size_t cap = 10000) : eps(std::move(e)), max_terms(cap) {
    if (!(eps > 0)) throw OutOfRange("TailConfig: eps must be positive");
    if (max_terms < 1) throw OutOfRange("TailConfig: max_terms must be at least 1");
  }
  // eps = 2^{-bits} at precision `prec`.
  static TailConfig bits(long bits, long prec, std::size_t cap = 10000) { return TailConfig(Scalar::exp2(-bits, prec), cap); }
};

inline long binom2(long n) { return n * (n - 1) / 2; }

// q^e for any integer e.
inline Scalar qpow(const Scalar& q, long e) { return pow(q, e); }

// (-1)^n q^{n(n-1)/2}
inline Scalar signed_qbinom2(const Scalar& q, long n) {
  Scalar r = qpow(q, binom2(n));
  return (n % 2) ? -r : r;
}

/// (a;q)_n = prod_{k<n} (1 - a q^k).
inline Scalar qpoch(const Scalar& a, const QValue& q, std::size_t n) {
  long prec = std::max(a.prec(), q.prec());
  Scalar prod(1, prec);
  Scalar aqk = a;
  for (std::size_t k = 0; k < n; ++k) {
    prod *= 1 - aqk;
    aqk *= q.value();
  }
  return prod;
}

// (a_1, ..., a_m; q)_n
inline Scalar qpoch(const ScalarList& as, const QValue& q, std::size_t n) {
  Scalar prod(1, q.prec());
  for (const auto& a : as) prod *= qpoch(a, q, n);
  return prod;
}

/// (a;q)_inf as a partial product.
///
/// Stops at the first K with |a||q|^K/(1-|q|) < eps/2 and |a||q|^K <= 1/2.
/// The neglected factors then satisfy sum_{k>=K} |log(1 - a q^k)| < eps, so
/// the relative error of the result is below eps (up to rounding).
inline Scalar qpoch_inf(const Scalar& a, const QValue& q, const TailConfig& tail) {
  long prec = std::max(a.prec(), q.prec());
  Scalar prod(1, prec);
  if (a.is_zero()) return prod;
  Scalar aqk = a;
  Scalar abs_q = abs(q.value());
  Scalar one_minus_q = 1 - abs_q;
  Scalar half_eps = tail.eps / 2;
  Scalar half = Scalar::rational(1, 2, prec);
  for (std::size_t k = 0; k <= tail.max_terms; ++k) {
    Scalar mag = abs(aqk);
    if (mag <= half && mag / one_minus_q < half_eps) return prod;
    prod *= 1 - aqk;
    aqk *= q.value();
  }
  throw TailNotReached("qpoch_inf: tail bound not reached within max_terms");
}

inline Scalar qpoch_inf(const ScalarList& as, const QValue& q, const TailConfig& tail) {
  Scalar prod(1, q.prec());
  for (const auto& a : as) prod *= qpoch_inf(a, q, tail);
  return prod;
}

/// Gaussian binomial [n k]_q, as the telescoped product
/// prod_{j=1..k} (1 - q^{n-k+j}) / (1 - q^j).
inline Scalar gauss_binom(std::size_t n, std::size_t k, const QValue& q) {
  if (k > n) throw OutOfRange("gauss_binom: k > n (" + std::to_string(k) + " > " + std::to_string(n) + ")");
  k = std::min(k, n - k);
  Scalar r(1, q.prec());
  Scalar top = qpow(q.value(), static_cast<long>(n - k + 1));
  Scalar bot = q.value();
  for (std::size_t j = 1; j <= k; ++j) {
    r *= 1 - top;
    r /= 1 - bot;
    top *= q.value();
    bot *= q.value();
  }
  return r;
}

/// Row [n 0], ..., [n n] built by the ratio [n k+1] = [n k](1-q^{n-k})/(1-q^{k+1}).
inline ScalarList gauss_binom_row(std::size_t n, const QValue& q) {
  ScalarList row;
  row.reserve(n + 1);
  row.emplace_back(1, q.prec());
  for (std::size_t k = 0; k < n; ++k) {
    Scalar next = row.back() * (1 - qpow(q.value(), static_cast<long>(n - k)));
    next /= 1 - qpow(q.value(), static_cast<long>(k + 1));
    row.push_back(std::move(next));
  }
  return row;
}

}  // namespace qhahn
