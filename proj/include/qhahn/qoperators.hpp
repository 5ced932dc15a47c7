#pragma once

// q-derivative, the operators Delta_{x,a}, Omega_{x,a}, Delta_x, their powers
// and q-exponentials acting on black-box functions.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qhahn/errors.hpp"
#include "qhahn/pseries.hpp"
#include "qhahn/qcore.hpp"
#include "qhahn/scalar.hpp"
#include "qhahn/summation.hpp"

namespace qhahn {

/// A pure function of (x, a). Functions of x alone ignore `a`.
struct FunctionHandle {
  std::function<Scalar(const Scalar& x, const Scalar& a)> eval;
  std::string name;

  Scalar operator()(const Scalar& x, const Scalar& a) const { return eval(x, a); }
};

/// A pure function of (x, y, a, b).
struct FunctionHandle4 {
  std::function<Scalar(const Scalar& x, const Scalar& y, const Scalar& a, const Scalar& b)> eval;
  std::string name;

  Scalar operator()(const Scalar& x, const Scalar& y, const Scalar& a, const Scalar& b) const { return eval(x, y, a, b); }
};

/// Delta:      g -> x(1-a) g(x, qa) + g(qx, a)
/// Omega:      g -> x g(x, a) + (1-a) g(qx, qa)
/// DeltaPlain: g -> x g(x) + g(qx)
enum class OperatorKind { Delta, Omega, DeltaPlain };

inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::Delta: return "Delta";
    case OperatorKind::Omega: return "Omega";
    case OperatorKind::DeltaPlain: return "DeltaPlain";
  }
  return "?";
}

/// Values f(q^i x, q^k a), evaluated once each. Lives for one call.
class ShiftGrid {
 public:
  ShiftGrid(const FunctionHandle& f, const Scalar& x, const Scalar& a, const QValue& q) : f_(f), q_(q) {
    xs_.push_back(x);
    as_.push_back(a);
  }

  const Scalar& x_at(std::size_t i) { return extend(xs_, i); }
  const Scalar& a_at(std::size_t k) { return extend(as_, k); }

  const Scalar& operator()(std::size_t i, std::size_t k) {
    std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(k);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Scalar v = f_(x_at(i), a_at(k));
    return memo_.emplace(key, std::move(v)).first->second;
  }

 private:
  const Scalar& extend(std::deque<Scalar>& v, std::size_t i) {
    while (v.size() <= i) v.push_back(v.back() * q_.value());
    return v[i];
  }

  const FunctionHandle& f_;
  const QValue& q_;
  std::deque<Scalar> xs_, as_;  // deque: references stay valid as it grows
  std::unordered_map<std::uint64_t, Scalar> memo_;
};

/// Successive q-derivatives D^0 f(x), D^1 f(x), ... of x -> f(x, a).
///
/// Keeps the anti-diagonal d[j] = D^j f(q^{m-j} x); adding the point
/// f(q^{m+1} x) extends it with e[j] = (d[j-1] - e[j-1]) / (q^{m+1-j} x).
/// Each level divides a difference by q^j x, so the table loses about
/// log2(1/|x|) + j log2(1/|q|) bits per level; f is evaluated with enough
/// guard bits for `max_order` levels and results are rounded back.
class QDerivLadder {
 public:
  QDerivLadder(const FunctionHandle& f, const Scalar& x, const Scalar& a, const QValue& q, std::size_t max_order)
      : f_(f), prec_(q.prec()) {
    if (x.is_zero()) throw ZeroPoint("q-derivative at x = 0");
    long work = prec_ + guard_bits(x, q, max_order);
    x_ = x.with_prec(work);
    a_ = a.with_prec(work);
    q_ = q.value().with_prec(work);
  }

  static long guard_bits(const Scalar& x, const QValue& q, std::size_t n) {
    double lx = std::max(0.0, -std::log2(std::fabs(x.to_double())));
    double lq = -std::log2(std::fabs(q.value().to_double()));
    double nn = static_cast<double>(n);
    return 32 + static_cast<long>(std::ceil(nn * lx + nn * (nn - 1) / 2 * lq));
  }

  // Returns D^m f(x) for m = 0, 1, 2, ... on successive calls.
  Scalar next() {
    std::size_t m = diag_.size();
    while (xs_.size() <= m) xs_.push_back(xs_.empty() ? x_ : xs_.back() * q_);
    ScalarList e;
    e.reserve(m + 1);
    e.push_back(f_(xs_[m], a_));
    for (std::size_t j = 1; j <= m; ++j) e.push_back((diag_[j - 1] - e[j - 1]) / xs_[m - j]);
    diag_ = std::move(e);
    return diag_.back().with_prec(prec_);
  }

 private:
  const FunctionHandle& f_;
  long prec_;
  Scalar x_, a_, q_;
  ScalarList xs_;
  ScalarList diag_;
};

/// D^n f at x with a held fixed.
inline Scalar qderiv_n(const FunctionHandle& f, const Scalar& x, const Scalar& a, const QValue& q, std::size_t n) {
  QDerivLadder ladder(f, x, a, q, n);
  Scalar v = ladder.next();
  for (std::size_t m = 1; m <= n; ++m) v = ladder.next();
  return v;
}

// D^0 f(x) .. D^n f(x)
inline ScalarList qderiv_table(const FunctionHandle& f, const Scalar& x, const Scalar& a, const QValue& q, std::size_t n) {
  QDerivLadder ladder(f, x, a, q, n);
  ScalarList out;
  for (std::size_t m = 0; m <= n; ++m) out.push_back(ladder.next());
  return out;
}

namespace detail {

inline Scalar op_pow_closed_on(OperatorKind kind, std::size_t n, ShiftGrid& grid, const Scalar& a, const QValue& q) {
  ScalarList binom = gauss_binom_row(n, q);
  const Scalar& x = grid.x_at(0);
  Scalar sum(0, q.prec());
  Scalar poch_a(1, q.prec());  // (a;q)_k
  Scalar aqk = a;
  for (std::size_t k = 0; k <= n; ++k) {
    Scalar term = binom[k];
    switch (kind) {
      case OperatorKind::Delta:
        term *= poch_a * pow(x, static_cast<long>(k));
        term *= grid(n - k, k);
        break;
      case OperatorKind::Omega:
        term *= poch_a * pow(x, static_cast<long>(n - k));
        term *= grid(k, k);
        break;
      case OperatorKind::DeltaPlain:
        term *= pow(x, static_cast<long>(k));
        term *= grid(n - k, 0);
        break;
    }
    sum += term;
    poch_a *= 1 - aqk;
    aqk *= q.value();
  }
  return sum;
}

}  // namespace detail

/// n-th operator power from the expanded form
///   Delta^n = sum_k [n k] (a;q)_k x^k eta_a^k eta_x^{n-k}
///   Omega^n = sum_k [n k] (a;q)_k x^{n-k} eta_a^k eta_x^k
///   Delta_x^n = sum_k [n k] x^k eta_x^{n-k}
inline Scalar op_pow_closed(OperatorKind kind, std::size_t n, const FunctionHandle& f, const Scalar& x, const Scalar& a,
                            const QValue& q) {
  ShiftGrid grid(f, x, a, q);
  return detail::op_pow_closed_on(kind, n, grid, a, q);
}

/// n-fold application of the single-step operator (oracle for op_pow_closed).
inline Scalar op_pow_iter(OperatorKind kind, std::size_t n, const FunctionHandle& f, const Scalar& x, const Scalar& a,
                          const QValue& q) {
  ShiftGrid grid(f, x, a, q);
  std::unordered_map<std::uint64_t, Scalar> memo;
  // (op^r f)(q^i x, q^k a)
  std::function<Scalar(std::size_t, std::size_t, std::size_t)> g = [&](std::size_t r, std::size_t i, std::size_t k) -> Scalar {
    if (r == 0) return grid(i, k);
    std::uint64_t key = (static_cast<std::uint64_t>(r) << 42) | (static_cast<std::uint64_t>(i) << 21) | k;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Scalar& X = grid.x_at(i);
    const Scalar& A = grid.a_at(k);
    Scalar v(q.prec());
    switch (kind) {
      case OperatorKind::Delta: v = X * (1 - A) * g(r - 1, i, k + 1) + g(r - 1, i + 1, k); break;
      case OperatorKind::Omega: v = X * g(r - 1, i, k) + (1 - A) * g(r - 1, i + 1, k + 1); break;
      case OperatorKind::DeltaPlain: v = X * g(r - 1, i, k) + g(r - 1, i + 1, k); break;
    }
    memo.emplace(key, v);
    return v;
  };
  return g(n, 0, 0);
}

enum class ExpMode { Closed, Series, QDeriv };

/// exp_q(t T) f(x) = sum_n t^n/(q;q)_n T^n f(x) for T = Delta_{x,a},
/// Omega_{x,a} or Delta_x.
///
/// Closed:  the product forms (axt;q)_inf/(xt;q)_inf sum t^n f(q^n x)/(q;q)_n
///          and 1/(xt;q)_inf sum (a;q)_n t^n f(q^n x)/(q;q)_n.
/// QDeriv:  the q-derivative expansions
///          (axt;q)_inf/(t,xt;q)_inf sum (-xt)^n q^{C(n,2)} D^n f/(q;q)_n and
///          (at;q)_inf/(t,xt;q)_inf sum (a;q)_n (-xt)^n q^{C(n,2)} D^n f/((q;q)_n (at;q)_n).
/// Series:  the defining sum with op_pow_closed.
/// Closed and QDeriv require f independent of a; Series does not.
inline Scalar expq_op(OperatorKind kind, const Scalar& t, const FunctionHandle& f, const Scalar& x, const Scalar& a,
                      const QValue& q, ExpMode mode, const TailConfig& tail) {
  long prec = q.prec();
  const Scalar& qv = q.value();
  if (t.is_zero()) return f(x, a);
  switch (mode) {
    case ExpMode::Series: {
      ShiftGrid grid(f, x, a, q);
      Scalar qq(1, prec);  // (q;q)_n
      Scalar tn(1, prec);
      TailSum acc(tail, prec);
      for (std::size_t n = 0;; ++n) {
        if (n > 0) {
          qq *= 1 - qpow(qv, static_cast<long>(n));
          tn *= t;
        }
        if (acc.add(tn / qq * detail::op_pow_closed_on(kind, n, grid, a, q))) return acc.value();
      }
    }
    case ExpMode::Closed: {
      bool with_a = kind == OperatorKind::Omega;
      ShiftGrid grid(f, x, a, q);
      Scalar coef(1, prec);  // t^n (a;q)_n / (q;q)_n, without (a;q)_n for the Delta kinds
      TailSum acc(tail, prec);
      for (std::size_t n = 0;; ++n) {
        if (n > 0) {
          coef *= t;
          if (with_a) coef *= 1 - a * qpow(qv, static_cast<long>(n - 1));
          coef /= 1 - qpow(qv, static_cast<long>(n));
        }
        if (acc.add(coef * grid(n, 0))) break;
      }
      Scalar pre = 1 / qpoch_inf(x * t, q, tail);
      if (kind == OperatorKind::Delta) pre *= qpoch_inf(a * x * t, q, tail);
      return pre * acc.value();
    }
    case ExpMode::QDeriv: {
      // The n-th term is bounded by |xt|^n q^{C(n,2)} / (q;q)_n times the
      // size of D^n f, taken as O(1); sum until that bound drops below eps.
      double lxt = std::log2(std::fabs((x * t).to_double()));
      double lq = std::log2(std::fabs(qv.to_double()));
      double leps = log2(tail.eps).to_double() - 32;
      double lqq = 0;  // log2 (q;q)_n
      std::size_t n_max = 0;
      while (static_cast<double>(n_max) * lxt + static_cast<double>(binom2(static_cast<long>(n_max))) * lq - lqq > leps) {
        ++n_max;
        lqq += std::log2(1 - std::pow(std::fabs(qv.to_double()), static_cast<double>(n_max)));
        if (n_max > tail.max_terms) throw TailNotReached("expq_op: q-derivative expansion needs too many terms");
      }
      QDerivLadder ladder(f, x, a, q, n_max);
      bool omega = kind == OperatorKind::Omega;
      Scalar coef(1, prec);  // (-xt)^n q^{C(n,2)} / (q;q)_n  [ * (a;q)_n/(at;q)_n ]
      Scalar mxt = -x * t;
      Scalar sum(0, prec);
      for (std::size_t n = 0; n <= n_max; ++n) {
        if (n > 0) {
          Scalar qn1 = qpow(qv, static_cast<long>(n - 1));
          coef *= mxt * qn1;
          coef /= 1 - qn1 * qv;
          if (omega) {
            coef *= 1 - a * qn1;
            coef /= 1 - a * t * qn1;
          }
        }
        sum += coef * ladder.next();
      }
      Scalar pre = 1 / (qpoch_inf(t, q, tail) * qpoch_inf(x * t, q, tail));
      if (kind == OperatorKind::Delta) pre *= qpoch_inf(a * x * t, q, tail);
      if (omega) pre *= qpoch_inf(a * t, q, tail);
      return pre * sum;
    }
  }
  return Scalar(prec);
}

/// The series sum_{n<=N} t^n T^n f(x) / (q;q)_n as coefficients.
inline SeriesT expq_op_series_t(OperatorKind kind, const FunctionHandle& f, const Scalar& x, const Scalar& a,
                                const QValue& q, std::size_t order) {
  ShiftGrid grid(f, x, a, q);
  SeriesT r(order, q.prec());
  Scalar qq(1, q.prec());
  for (std::size_t n = 0; n <= order; ++n) {
    if (n > 0) qq *= 1 - qpow(q.value(), static_cast<long>(n));
    r[n] = detail::op_pow_closed_on(kind, n, grid, a, q) / qq;
  }
  return r;
}

/// Which single-variable operator acts on f first in a composed power.
enum class ActFirst { X, Y };

/// (T_y T_x)^n f or (T_x T_y)^n f at (x, y, a, b), by alternating single
/// applications of T_{x,a} and T_{y,b} (T = Delta or Omega). Returns the
/// values for n = 0..max_n.
inline ScalarList composed_pow_table(OperatorKind kind, ActFirst first, std::size_t max_n, const FunctionHandle4& f,
                                     const Scalar& x, const Scalar& y, const Scalar& a, const Scalar& b,
                                     const QValue& q) {
  if (kind == OperatorKind::DeltaPlain) throw OutOfRange("composed_pow_table: use Delta or Omega");
  const Scalar& qv = q.value();
  std::deque<Scalar> qp{Scalar(1, q.prec())};
  auto qpw = [&](std::size_t k) -> const Scalar& {
    while (qp.size() <= k) qp.push_back(qp.back() * qv);
    return qp[k];
  };
  ScalarList out;
  for (std::size_t n = 0; n <= max_n; ++n) {
    // step s = 0..2n counts single applications from the outside in; the
    // operator at step s acts on variable x when (s even) == (x is outer).
    std::unordered_map<std::uint64_t, Scalar> memo;
    bool x_outer = first == ActFirst::Y;
    std::function<Scalar(std::size_t, std::size_t, std::size_t, std::size_t, std::size_t)> g =
        [&](std::size_t s, std::size_t i, std::size_t j, std::size_t k, std::size_t l) -> Scalar {
      if (s == 2 * n) return f(x * qpw(i), y * qpw(j), a * qpw(k), b * qpw(l));
      std::uint64_t key = (static_cast<std::uint64_t>(s) << 50) | (static_cast<std::uint64_t>(i) << 38) |
                          (static_cast<std::uint64_t>(j) << 26) | (static_cast<std::uint64_t>(k) << 13) | l;
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      bool on_x = (s % 2 == 0) == x_outer;
      Scalar v(q.prec());
      if (on_x) {
        Scalar X = x * qpw(i), A = a * qpw(k);
        if (kind == OperatorKind::Delta)
          v = X * (1 - A) * g(s + 1, i, j, k + 1, l) + g(s + 1, i + 1, j, k, l);
        else
          v = X * g(s + 1, i, j, k, l) + (1 - A) * g(s + 1, i + 1, j, k + 1, l);
      } else {
        Scalar Y = y * qpw(j), B = b * qpw(l);
        if (kind == OperatorKind::Delta)
          v = Y * (1 - B) * g(s + 1, i, j, k, l + 1) + g(s + 1, i, j + 1, k, l);
        else
          v = Y * g(s + 1, i, j, k, l) + (1 - B) * g(s + 1, i, j + 1, k, l + 1);
      }
      memo.emplace(key, v);
      return v;
    };
    out.push_back(g(0, 0, 0, 0, 0));
  }
  return out;
}

}  // namespace qhahn
