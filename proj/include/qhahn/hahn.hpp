#pragma once

// Homogeneous Hahn polynomials, the two-parameter family and the
// Al-Salam-Carlitz polynomials psi_n^{(a)}.

#include <cstddef>

#include "qhahn/errors.hpp"
#include "qhahn/qcore.hpp"
#include "qhahn/scalar.hpp"

namespace qhahn {

/// Phi_n^{(a)}(x, y | q) = sum_k [n k] (a;q)_k x^k y^{n-k}.
inline Scalar phi(std::size_t n, const Scalar& a, const Scalar& x, const Scalar& y, const QValue& q) {
  long prec = q.prec();
  Scalar sum(0, prec);
  Scalar binom(1, prec);  // [n k]
  Scalar poch(1, prec);   // (a;q)_k
  Scalar xk(1, prec);
  Scalar aqk = a;
  ScalarList ypow{Scalar(1, prec)};
  for (std::size_t k = 1; k <= n; ++k) ypow.push_back(ypow.back() * y);
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) {
      binom *= 1 - qpow(q.value(), static_cast<long>(n - k + 1));
      binom /= 1 - qpow(q.value(), static_cast<long>(k));
      poch *= 1 - aqk;
      aqk *= q.value();
      xk *= x;
    }
    sum += binom * poch * xk * ypow[n - k];
  }
  return sum;
}

/// Phi_n^{(alpha,beta)}(u, v | q) = sum_k [n k] (alpha;q)_k (beta;q)_{n-k} u^k v^{n-k}.
inline Scalar phi2(std::size_t n, const Scalar& alpha, const Scalar& beta, const Scalar& u, const Scalar& v,
                   const QValue& q) {
  long prec = q.prec();
  ScalarList binom = gauss_binom_row(n, q);
  ScalarList pa{Scalar(1, prec)}, pb{Scalar(1, prec)}, up{Scalar(1, prec)}, vp{Scalar(1, prec)};
  for (std::size_t k = 1; k <= n; ++k) {
    Scalar qk1 = qpow(q.value(), static_cast<long>(k - 1));
    pa.push_back(pa.back() * (1 - alpha * qk1));
    pb.push_back(pb.back() * (1 - beta * qk1));
    up.push_back(up.back() * u);
    vp.push_back(vp.back() * v);
  }
  Scalar sum(0, prec);
  for (std::size_t k = 0; k <= n; ++k) sum += binom[k] * pa[k] * pb[n - k] * up[k] * vp[n - k];
  return sum;
}

/// psi_n^{(a)}(x) = sum_r (-1)^r [n r] q^{C(r+1,2) - nr} (1/a;q)_r (ax)^r,
/// using (1/a;q)_r a^r = prod_{j<r} (a - q^j).
inline Scalar psi(std::size_t n, const Scalar& a, const Scalar& x, const QValue& q) {
  if (a.is_zero()) throw ZeroParameter("psi: a must be nonzero");
  long prec = q.prec();
  const Scalar& qv = q.value();
  ScalarList binom = gauss_binom_row(n, q);
  Scalar sum(0, prec);
  Scalar factor(1, prec);  // prod_{j<r} (a - q^j)
  Scalar xr(1, prec);
  long nn = static_cast<long>(n);
  for (long r = 0; r <= nn; ++r) {
    if (r > 0) {
      factor *= a - qpow(qv, r - 1);
      xr *= x;
    }
    Scalar term = binom[static_cast<std::size_t>(r)] * qpow(qv, r * (r + 1) / 2 - nn * r) * factor * xr;
    if (r % 2) term = -term;
    sum += term;
  }
  return sum;
}

/// D_x^k Phi_m^{(a)}(x, 1 | q) = (a;q)_k (q;q)_m / (q;q)_{m-k} Phi_{m-k}^{(aq^k)}(x, 1 | q); zero for k > m.
inline Scalar phi_qderiv(std::size_t m, const Scalar& a, const Scalar& x, const QValue& q, std::size_t k) {
  if (k > m) return Scalar(0, q.prec());
  const Scalar& qv = q.value();
  Scalar c = qpoch(a, q, k);
  for (std::size_t j = m - k + 1; j <= m; ++j) c *= 1 - qpow(qv, static_cast<long>(j));
  Scalar one(1, q.prec());
  return c * phi(m - k, a * qpow(qv, static_cast<long>(k)), x, one, q);
}

}  // namespace qhahn
