#pragma once

// Basic hypergeometric series r_phi_s and the double series Theta^{A:B;C}_{D:E;F}.

#include <cstddef>
#include <vector>

#include "qhahn/errors.hpp"
#include "qhahn/qcore.hpp"
#include "qhahn/scalar.hpp"
#include "qhahn/summation.hpp"

namespace qhahn {

/// Parameters of
///   sum_n (a_1..a_r;q)_n / (q,b_1..b_s;q)_n [(-1)^n q^{n(n-1)/2}]^{1+s-r} z^n.
struct PhiSpec {
  ScalarList uppers;
  ScalarList lowers;
  QValue q;
  Scalar z;
};

/// Parameters of the double series
///   sum_{m,n} (a;q)_{m+n} (b;q)_m (c;q)_n / ((d;q)_{m+n} (q,e;q)_m (q,f;q)_n)
///     [(-1)^{m+n} q^{C(m+n,2)}]^{D-A} [(-1)^m q^{C(m,2)}]^{1+E-B}
///     [(-1)^n q^{C(n,2)}]^{1+F-C} x^m y^n
/// where each letter stands for a whole parameter list.
struct ThetaSpec {
  ScalarList a, b, c, d, e, f;
  QValue q;
  Scalar x;
  Scalar y;
};

namespace detail {

// Below this magnitude a factor (1 - p q^k) counts as an exact zero.
inline Scalar zero_floor(long prec) { return Scalar::exp2(-prec / 2, prec); }

// prod_i (1 - p_i) for the already shifted parameters p_i = a_i q^k.
// Sets `vanished` when one factor is below the zero floor.
inline Scalar shifted_product(const ScalarList& shifted, const Scalar& floor, bool& vanished) {
  Scalar prod(1, floor.prec());
  vanished = false;
  for (const auto& p : shifted) {
    Scalar factor = 1 - p;
    if (abs(factor) < floor) {
      vanished = true;
      return Scalar(0, floor.prec());
    }
    prod *= factor;
  }
  return prod;
}

inline void shift_all(ScalarList& shifted, const Scalar& q) {
  for (auto& p : shifted) p *= q;
}

inline long list_len(const ScalarList& l) { return static_cast<long>(l.size()); }

}  // namespace detail

/// n-th term of r_phi_s computed from scratch (no recurrence).
inline Scalar rphis_term(const PhiSpec& spec, std::size_t n) {
  long r = detail::list_len(spec.uppers);
  long s = detail::list_len(spec.lowers);
  Scalar t = qpoch(spec.uppers, spec.q, n);
  t /= qpoch(spec.q.value(), spec.q, n);
  t /= qpoch(spec.lowers, spec.q, n);
  long e = 1 + s - r;
  if (e != 0) t *= pow(signed_qbinom2(spec.q.value(), static_cast<long>(n)), e);
  t *= pow(spec.z, static_cast<long>(n));
  return t;
}

/// r_phi_s by the term-ratio recurrence.
///
/// Terminates when an upper factor (1 - a_i q^n) vanishes. Otherwise stops
/// once the ratio majorant
///   R(m) = prod(1+|a_i||q|^m) / ((1-|q|^{m+1}) prod(1-|b_j||q|^m)) |q|^{m(1+s-r)} |z|
/// (non-increasing in m, bounding every later term ratio) gives
/// |t_m| R/(1-R) < eps.
inline Scalar rphis(const PhiSpec& spec, const TailConfig& tail) {
  long prec = std::max(spec.q.prec(), spec.z.prec());
  const Scalar& q = spec.q.value();
  Scalar floor = detail::zero_floor(prec);
  long e = 1 + detail::list_len(spec.lowers) - detail::list_len(spec.uppers);

  ScalarList ups = spec.uppers;  // a_i q^n
  ScalarList lows = spec.lowers;  // b_j q^n
  ScalarList abs_ups, abs_lows;
  for (const auto& a : spec.uppers) abs_ups.push_back(abs(a));
  for (const auto& b : spec.lowers) abs_lows.push_back(abs(b));
  Scalar abs_q = abs(q);
  Scalar abs_z = abs(spec.z);

  Scalar sum(1, prec);
  Scalar term(1, prec);
  Scalar qn(1, prec);       // q^n
  Scalar abs_qn(1, prec);   // |q|^n
  for (std::size_t n = 0; n < tail.max_terms; ++n) {
    bool upper_zero = false;
    Scalar num = detail::shifted_product(ups, floor, upper_zero);
    if (upper_zero) return sum;
    bool lower_zero = false;
    Scalar den = detail::shifted_product(lows, floor, lower_zero);
    if (lower_zero) throw PoleInLower("rphis: lower parameter hits q^{-" + std::to_string(n) + "}");
    Scalar qn1 = qn * q;
    den *= 1 - qn1;
    Scalar ratio = num / den;
    if (e != 0) ratio *= pow(-qn, e);
    ratio *= spec.z;
    term *= ratio;
    sum += term;
    if (term.is_zero()) return sum;

    detail::shift_all(ups, q);
    detail::shift_all(lows, q);
    qn = std::move(qn1);
    abs_qn *= abs_q;

    if (e >= 0) {
      // majorant for ratios t_{k+1}/t_k, k >= n+1
      Scalar maj(1, prec);
      bool valid = true;
      for (const auto& a : abs_ups) maj *= 1 + a * abs_qn;
      for (const auto& b : abs_lows) {
        Scalar bq = b * abs_qn;
        if (!(bq < 1)) {
          valid = false;
          break;
        }
        maj /= 1 - bq;
      }
      if (valid) {
        maj /= 1 - abs_qn * abs_q;
        if (e > 0) maj *= pow(abs_qn, e);
        maj *= abs_z;
        if (maj < 1 && abs(term) * maj / (1 - maj) < tail.eps) return sum;
      }
    }
  }
  throw TailNotReached("rphis: tail bound not reached within max_terms");
}

/// Term (m, n) of the double series, computed from scratch.
inline Scalar theta_term(const ThetaSpec& spec, std::size_t m, std::size_t n) {
  const QValue& q = spec.q;
  long A = detail::list_len(spec.a), B = detail::list_len(spec.b), C = detail::list_len(spec.c);
  long D = detail::list_len(spec.d), E = detail::list_len(spec.e), F = detail::list_len(spec.f);
  Scalar t = qpoch(spec.a, q, m + n) * qpoch(spec.b, q, m) * qpoch(spec.c, q, n);
  t /= qpoch(spec.d, q, m + n) * qpoch(spec.e, q, m) * qpoch(spec.f, q, n);
  t /= qpoch(q.value(), q, m) * qpoch(q.value(), q, n);
  long mm = static_cast<long>(m), nn = static_cast<long>(n);
  if (D - A != 0) t *= pow(signed_qbinom2(q.value(), mm + nn), D - A);
  if (1 + E - B != 0) t *= pow(signed_qbinom2(q.value(), mm), 1 + E - B);
  if (1 + F - C != 0) t *= pow(signed_qbinom2(q.value(), nn), 1 + F - C);
  return t * pow(spec.x, mm) * pow(spec.y, nn);
}

/// The double series summed over anti-diagonals m + n = K.
///
/// Each diagonal is produced from the previous one by the m-direction term
/// ratio (plus one n-direction step for T(0, K)). Summation stops when the
/// diagonal sums |D_K| satisfy the TailSum criterion, or a diagonal is
/// exactly zero (every later term then vanishes too).
inline Scalar theta_double(const ThetaSpec& spec, const TailConfig& tail) {
  const Scalar& q = spec.q.value();
  long prec = std::max({spec.q.prec(), spec.x.prec(), spec.y.prec()});
  Scalar floor = detail::zero_floor(prec);
  long A = detail::list_len(spec.a), B = detail::list_len(spec.b), C = detail::list_len(spec.c);
  long D = detail::list_len(spec.d), E = detail::list_len(spec.e), F = detail::list_len(spec.f);
  long e_mn = D - A, e_m = 1 + E - B, e_n = 1 + F - C;

  std::vector<Scalar> qpows{Scalar(1, prec)};  // q^k
  auto qp = [&](std::size_t k) -> const Scalar& {
    while (qpows.size() <= k) qpows.push_back(qpows.back() * q);
    return qpows[k];
  };
  auto factor_list = [&](const ScalarList& params, std::size_t k, bool& vanished) {
    ScalarList shifted;
    shifted.reserve(params.size());
    for (const auto& p : params) shifted.push_back(p * qp(k));
    return detail::shifted_product(shifted, floor, vanished);
  };

  // ratio T(m+1, n) / T(m, n), or T(m, n+1) / T(m, n) when `along_n`
  auto ratio = [&](std::size_t m, std::size_t n, bool along_n) {
    std::size_t own = along_n ? n : m;
    const ScalarList& top = along_n ? spec.c : spec.b;
    const ScalarList& bottom = along_n ? spec.f : spec.e;
    long e_own = along_n ? e_n : e_m;
    bool z1 = false, z2 = false, p1 = false, p2 = false;
    Scalar r = factor_list(spec.a, m + n, z1);
    if (!z1) r *= factor_list(top, own, z2);
    if (z1 || z2) return Scalar(0, prec);
    Scalar den = factor_list(spec.d, m + n, p1);
    if (!p1) den *= factor_list(bottom, own, p2);
    if (p1 || p2) throw PoleInLower("theta_double: lower parameter hits q^{-k}");
    den *= 1 - qp(own + 1);
    r /= den;
    if (e_mn != 0) r *= pow(-qp(m + n), e_mn);
    if (e_own != 0) r *= pow(-qp(own), e_own);
    r *= along_n ? spec.y : spec.x;
    return r;
  };

  std::vector<Scalar> diag{Scalar(1, prec)};  // diag[j] = T(K - j, j)
  TailSum acc(tail, prec);
  acc.add(Scalar(1, prec));
  for (std::size_t K = 1;; ++K) {
    std::vector<Scalar> next;
    next.reserve(K + 1);
    Scalar diag_sum(0, prec);
    Scalar diag_abs(0, prec);
    for (std::size_t j = 0; j < K; ++j) {
      const Scalar& src = diag[j];  // T(K-1-j, j)
      Scalar t = src.is_zero() ? Scalar(0, prec) : src * ratio(K - 1 - j, j, false);
      diag_sum += t;
      diag_abs += abs(t);
      next.push_back(std::move(t));
    }
    const Scalar& last = diag[K - 1];  // T(0, K-1)
    Scalar t = last.is_zero() ? Scalar(0, prec) : last * ratio(0, K - 1, true);
    diag_sum += t;
    diag_abs += abs(t);
    next.push_back(std::move(t));
    diag = std::move(next);
    if (diag_abs.is_zero()) return acc.value() + diag_sum;
    if (acc.add(diag_sum, diag_abs)) return acc.value();
  }
}

}  // namespace qhahn
