#pragma once

// Dense truncated power series in t, and in (t, s), with Scalar coefficients.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "qhahn/errors.hpp"
#include "qhahn/qcore.hpp"
#include "qhahn/scalar.hpp"

namespace qhahn {

/// Truncated series c_0 + c_1 t + ... + c_N t^N.
class SeriesT {
 public:
  SeriesT(std::size_t order, long prec) : c_(order + 1, Scalar(0, prec)) {}
  explicit SeriesT(ScalarList coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw OutOfRange("SeriesT needs at least one coefficient");
  }
  static SeriesT constant(const Scalar& v, std::size_t order) {
    SeriesT r(order, v.prec());
    r.c_[0] = v;
    return r;
  }
  static SeriesT one(std::size_t order, long prec) { return constant(Scalar(1, prec), order); }

  std::size_t order() const { return c_.size() - 1; }
  long prec() const { return c_[0].prec(); }
  const Scalar& operator[](std::size_t i) const { return c_[i]; }
  Scalar& operator[](std::size_t i) { return c_[i]; }
  const ScalarList& coeffs() const { return c_; }

  SeriesT truncated(std::size_t order) const {
    ScalarList c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(std::min(order, this->order()) + 1));
    return SeriesT(std::move(c));
  }

  SeriesT& operator+=(const SeriesT& o) {
    std::size_t n = std::min(order(), o.order());
    c_.resize(n + 1, Scalar(0, prec()));
    for (std::size_t i = 0; i <= n; ++i) c_[i] += o.c_[i];
    return *this;
  }
  SeriesT& operator-=(const SeriesT& o) {
    std::size_t n = std::min(order(), o.order());
    c_.resize(n + 1, Scalar(0, prec()));
    for (std::size_t i = 0; i <= n; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  SeriesT& operator*=(const Scalar& k) {
    for (auto& c : c_) c *= k;
    return *this;
  }
  friend SeriesT operator+(SeriesT a, const SeriesT& b) { return a += b; }
  friend SeriesT operator-(SeriesT a, const SeriesT& b) { return a -= b; }
  friend SeriesT operator*(SeriesT a, const Scalar& k) { return a *= k; }

  // Horner evaluation of the truncated polynomial.
  Scalar evaluate(const Scalar& t) const {
    Scalar acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) {
      acc *= t;
      acc += c_[i];
    }
    return acc;
  }

 private:
  ScalarList c_;
};

/// Cauchy product, truncated at the smaller of the two orders.
inline SeriesT ps_mul(const SeriesT& a, const SeriesT& b) {
  std::size_t n = std::min(a.order(), b.order());
  SeriesT r(n, std::max(a.prec(), b.prec()));
  for (std::size_t i = 0; i <= n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; i + j <= n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// Reciprocal by the triangular recurrence b_n = -(sum_{k=1}^n a_k b_{n-k}) / a_0.
/// A constant term below 2^{-prec/2} is treated as zero.
inline SeriesT ps_inv(const SeriesT& a) {
  Scalar floor = Scalar::exp2(-a.prec() / 2, a.prec());
  if (abs(a[0]) < floor) throw SingularSeries("ps_inv: constant term is zero");
  std::size_t n = a.order();
  SeriesT b(n, a.prec());
  b[0] = 1 / a[0];
  for (std::size_t m = 1; m <= n; ++m) {
    Scalar acc(0, a.prec());
    for (std::size_t k = 1; k <= m; ++k) acc += a[k] * b[m - k];
    b[m] = -acc * b[0];
  }
  return b;
}

/// Multiply by t^k (coefficients pushed past the order are dropped).
inline SeriesT ps_shift(const SeriesT& a, std::size_t k) {
  SeriesT r(a.order(), a.prec());
  for (std::size_t i = 0; i + k <= a.order(); ++i) r[i + k] = a[i];
  return r;
}

/// Substitute t -> c t.
inline SeriesT ps_scale_var(const SeriesT& a, const Scalar& c) {
  SeriesT r = a;
  Scalar ck(1, a.prec());
  for (std::size_t i = 0; i <= a.order(); ++i) {
    r[i] *= ck;
    ck *= c;
  }
  return r;
}

inline constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

/// (ct;q)_n as a series in t to order N; n == kInfinite gives the Euler
/// expansion of (ct;q)_inf = sum_k (-1)^k q^{C(k,2)} c^k t^k / (q;q)_k.
inline SeriesT poch_series(const Scalar& c, const QValue& q, std::size_t n, std::size_t order) {
  long prec = std::max(c.prec(), q.prec());
  SeriesT r = SeriesT::one(order, prec);
  if (n == kInfinite) {
    Scalar coeff(1, prec);  // (-c)^k q^{C(k,2)} / (q;q)_k
    Scalar qk(1, prec);     // q^k
    for (std::size_t k = 1; k <= order; ++k) {
      coeff *= -c * qk;
      qk *= q.value();
      coeff /= 1 - qk;
      r[k] = coeff;
    }
    return r;
  }
  // multiply in the factors (1 - c q^j t); degree never exceeds min(n, order)
  Scalar cqj = c;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t top = std::min(j + 1, order);
    for (std::size_t i = top; i >= 1; --i) r[i] -= cqj * r[i - 1];
    cqj *= q.value();
  }
  return r;
}

/// Truncated series sum c_{ij} t^i s^j, 0 <= i <= N, 0 <= j <= M.
class SeriesTS {
 public:
  SeriesTS(std::size_t order_t, std::size_t order_s, long prec)
      : nt_(order_t), ns_(order_s), c_((order_t + 1) * (order_s + 1), Scalar(0, prec)) {}

  static SeriesTS one(std::size_t order_t, std::size_t order_s, long prec) {
    SeriesTS r(order_t, order_s, prec);
    r.at(0, 0) = Scalar(1, prec);
    return r;
  }
  // a(t) viewed as a series in (t, s)
  static SeriesTS from_t(const SeriesT& a, std::size_t order_s) {
    SeriesTS r(a.order(), order_s, a.prec());
    for (std::size_t i = 0; i <= a.order(); ++i) r.at(i, 0) = a[i];
    return r;
  }
  // b(s) viewed as a series in (t, s)
  static SeriesTS from_s(const SeriesT& b, std::size_t order_t) {
    SeriesTS r(order_t, b.order(), b.prec());
    for (std::size_t j = 0; j <= b.order(); ++j) r.at(0, j) = b[j];
    return r;
  }
  // a(t) b(s)
  static SeriesTS outer(const SeriesT& a, const SeriesT& b) {
    SeriesTS r(a.order(), b.order(), std::max(a.prec(), b.prec()));
    for (std::size_t i = 0; i <= a.order(); ++i)
      for (std::size_t j = 0; j <= b.order(); ++j) r.at(i, j) = a[i] * b[j];
    return r;
  }

  std::size_t order_t() const { return nt_; }
  std::size_t order_s() const { return ns_; }
  long prec() const { return c_[0].prec(); }
  const Scalar& at(std::size_t i, std::size_t j) const { return c_[i * (ns_ + 1) + j]; }
  Scalar& at(std::size_t i, std::size_t j) { return c_[i * (ns_ + 1) + j]; }

  SeriesTS& operator+=(const SeriesTS& o) {
    for (std::size_t i = 0; i <= std::min(nt_, o.nt_); ++i)
      for (std::size_t j = 0; j <= std::min(ns_, o.ns_); ++j) at(i, j) += o.at(i, j);
    return *this;
  }
  SeriesTS& operator*=(const Scalar& k) {
    for (auto& c : c_) c *= k;
    return *this;
  }

  Scalar evaluate(const Scalar& t, const Scalar& s) const {
    Scalar acc(0, prec());
    Scalar ti(1, prec());
    for (std::size_t i = 0; i <= nt_; ++i) {
      Scalar sj = ti;
      for (std::size_t j = 0; j <= ns_; ++j) {
        acc += at(i, j) * sj;
        sj *= s;
      }
      ti *= t;
    }
    return acc;
  }

 private:
  std::size_t nt_, ns_;
  ScalarList c_;
};

/// Two-variable Cauchy product, truncated at the smaller orders.
inline SeriesTS ps_mul(const SeriesTS& a, const SeriesTS& b) {
  std::size_t nt = std::min(a.order_t(), b.order_t());
  std::size_t ns = std::min(a.order_s(), b.order_s());
  SeriesTS r(nt, ns, std::max(a.prec(), b.prec()));
  for (std::size_t i = 0; i <= nt; ++i)
    for (std::size_t j = 0; j <= ns; ++j) {
      const Scalar& aij = a.at(i, j);
      if (aij.is_zero()) continue;
      for (std::size_t k = 0; i + k <= nt; ++k)
        for (std::size_t l = 0; j + l <= ns; ++l) r.at(i + k, j + l) += aij * b.at(k, l);
    }
  return r;
}

/// Multiply by t^dt s^ds.
inline SeriesTS ps_shift(const SeriesTS& a, std::size_t dt, std::size_t ds) {
  SeriesTS r(a.order_t(), a.order_s(), a.prec());
  for (std::size_t i = 0; i + dt <= a.order_t(); ++i)
    for (std::size_t j = 0; j + ds <= a.order_s(); ++j) r.at(i + dt, j + ds) = a.at(i, j);
  return r;
}

}  // namespace qhahn
