#pragma once

// The registered identities. Each entry builds both sides from the engine's
// primitives at a sampled parameter point.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qhahn/hahn.hpp"
#include "qhahn/hyper.hpp"
#include "qhahn/pseries.hpp"
#include "qhahn/qcore.hpp"
#include "qhahn/qoperators.hpp"
#include "qhahn/summation.hpp"
#include "qhahn/verify.hpp"

namespace qhahn {

/// Test functions of x alone (the operator identities whose statement takes f = f(x)).
inline std::vector<FunctionHandle> univariate_functions() {
  return {
      {[](const Scalar& x, const Scalar&) { return Scalar(1, x.prec()); }, "1"},
      {[](const Scalar& x, const Scalar&) { return x; }, "x"},
      {[](const Scalar& x, const Scalar&) { return x * x; }, "x^2"},
      {[](const Scalar& x, const Scalar&) { return 1 / (1 - x / 4); }, "1/(1-x/4)"},
  };
}

/// Test functions of (x, a).
inline std::vector<FunctionHandle> two_variable_functions() {
  return {
      {[](const Scalar& x, const Scalar&) { return Scalar(1, x.prec()); }, "1"},
      {[](const Scalar& x, const Scalar&) { return x; }, "x"},
      {[](const Scalar&, const Scalar& a) { return a; }, "a"},
      {[](const Scalar& x, const Scalar& a) { return x + a; }, "x+a"},
      {[](const Scalar& x, const Scalar& a) { return x * a; }, "xa"},
      {[](const Scalar& x, const Scalar& a) { return 1 / (1 - x * a / 4); }, "1/(1-xa/4)"},
  };
}

/// Test functions of (x, y, a, b).
inline std::vector<FunctionHandle4> four_variable_functions() {
  using S = const Scalar&;
  return {
      {[](S x, S, S, S) { return Scalar(1, x.prec()); }, "1"},
      {[](S x, S y, S, S) { return x * y; }, "xy"},
      {[](S x, S y, S, S) { return 1 / (1 - x * y / 4); }, "1/(1-xy/4)"},
      {[](S x, S y, S a, S b) { return x * a + y * b; }, "xa+yb"},
  };
}

namespace reg {

// Shorthands bound to one sampled point.
struct Env {
  explicit Env(const Point& p) : prec(p.prec()), q(p.q()), qv(p.q().value()), tail(p.tail()), N(p.order()) {}

  Scalar one() const { return Scalar(1, prec); }
  Scalar zero() const { return Scalar(0, prec); }
  Scalar qn(long e) const { return qpow(qv, e); }
  Scalar poch(const Scalar& a, std::size_t n) const { return qpoch(a, q, n); }
  Scalar pinf(const Scalar& a) const { return qpoch_inf(a, q, tail); }
  Scalar pinf(std::initializer_list<Scalar> as) const {
    Scalar r = one();
    for (const auto& a : as) r *= pinf(a);
    return r;
  }
  Scalar gb(std::size_t n, std::size_t k) const { return gauss_binom(n, k, q); }
  // (q;q)_0 .. (q;q)_n
  ScalarList qq(std::size_t n) const {
    ScalarList r{one()};
    for (std::size_t k = 1; k <= n; ++k) r.push_back(r.back() * (1 - qn(static_cast<long>(k))));
    return r;
  }
  Scalar sq(long n) const { return signed_qbinom2(qv, n); }
  Scalar rphi(ScalarList up, ScalarList low, const Scalar& z) const {
    return rphis(PhiSpec{std::move(up), std::move(low), q, z}, tail);
  }

  // (ct;q)_n and (ct;q)_inf as series in t
  SeriesT poch_t(const Scalar& c, std::size_t n) const { return poch_series(c, q, n, N); }
  SeriesT pinf_t(const Scalar& c) const { return poch_series(c, q, kInfinite, N); }
  SeriesT inv_pinf_t(const Scalar& c) const { return ps_inv(pinf_t(c)); }

  long prec;
  const QValue& q;
  const Scalar& qv;
  const TailConfig& tail;
  std::size_t N;
};

inline SeriesT mul(std::initializer_list<SeriesT> fs) {
  auto it = fs.begin();
  SeriesT r = *it;
  for (++it; it != fs.end(); ++it) r = ps_mul(r, *it);
  return r;
}

inline void append(ScalarList& out, const SeriesT& s) { out.insert(out.end(), s.coeffs().begin(), s.coeffs().end()); }

inline void append(ScalarList& out, const SeriesTS& s) {
  for (std::size_t i = 0; i <= s.order_t(); ++i)
    for (std::size_t j = 0; j <= s.order_s(); ++j) out.push_back(s.at(i, j));
}

// sum_n c(n) t^n up to the order
inline SeriesT series_from(const Env& e, const std::function<Scalar(std::size_t)>& c) {
  SeriesT r(e.N, e.prec);
  for (std::size_t n = 0; n <= e.N; ++n) r[n] = c(n);
  return r;
}

inline bool below(double v, double bound) { return std::fabs(v) < bound; }

inline std::vector<ParamSpec> params(std::initializer_list<const char*> names) {
  std::vector<ParamSpec> r;
  for (const char* n : names) r.push_back({n, ParamKind::Unit});
  r.push_back({"q", ParamKind::Base});
  return r;
}

// Accumulate terms produced by `term(n)`, n = 0, 1, ..., until the tail
// bound is met.
inline Scalar sum_until(const Env& e, const std::function<Scalar(std::size_t)>& term) {
  TailSum acc(e.tail, e.prec);
  for (std::size_t n = 0;; ++n)
    if (acc.add(term(n))) return acc.value();
}

/// Lazily extended table of (c;q)_0, (c;q)_1, ...
class PochTable {
 public:
  PochTable(const Scalar& c, const Env& e) : c_(c), e_(e) { v_.push_back(e.one()); }
  const Scalar& operator[](std::size_t n) {
    while (v_.size() <= n) v_.push_back(v_.back() * (1 - c_ * e_.qn(static_cast<long>(v_.size() - 1))));
    return v_[n];
  }

 private:
  Scalar c_;
  const Env& e_;
  std::deque<Scalar> v_;
};

// ---------------------------------------------------------------------------
// Classical baselines

inline Identity q_binomial() {
  Identity id;
  id.id = "I-0a";
  id.citation = "q-binomial theorem";
  id.params = params({"a", "z"});
  id.domain = [](const Point& p) { return below(p.approx("z"), 0.9); };
  id.lhs = [](const Point& p) {
    Env e(p);
    return ScalarList{e.rphi({p["a"]}, {}, p["z"])};
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    return ScalarList{e.pinf(p["a"] * p["z"]) / e.pinf(p["z"])};
  };
  return id;
}

inline Identity euler_pair() {
  Identity id;
  id.id = "I-0b";
  id.citation = "Euler's two q-exponential expansions";
  id.params = params({"z"});
  id.domain = [](const Point& p) { return below(p.approx("z"), 0.9); };
  id.lhs = [](const Point& p) {
    Env e(p);
    return ScalarList{e.rphi({e.zero()}, {}, p["z"]), e.rphi({}, {}, p["z"])};
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar z = p["z"];
    return ScalarList{1 / e.pinf(z), e.pinf(z)};
  };
  return id;
}

inline Identity jackson() {
  Identity id;
  id.id = "I-0c";
  id.citation = "Jackson's transformation of 2phi1 into 2phi2";
  id.params = params({"a", "b", "c", "z"});
  id.domain = [](const Point& p) {
    return below(p.approx("z"), 0.9) && below(p.approx("b") * p.approx("z"), 0.9);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    return ScalarList{e.rphi({p["a"], p["b"]}, {p["c"]}, p["z"])};
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], c = p["c"], z = p["z"];
    return ScalarList{e.pinf(a * z) / e.pinf(z) * e.rphi({a, c / b}, {c, a * z}, b * z)};
  };
  return id;
}

inline Identity q_gauss() {
  Identity id;
  id.id = "I-0d";
  id.citation = "q-Gauss summation";
  id.params = params({"a", "b", "c"});
  id.domain = [](const Point& p) { return below(p.approx("c") / (p.approx("a") * p.approx("b")), 0.9); };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], c = p["c"];
    return ScalarList{e.rphi({a, b}, {c}, c / (a * b))};
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], c = p["c"];
    return ScalarList{e.pinf({c / a, c / b}) / e.pinf({c, c / (a * b)})};
  };
  return id;
}

// ---------------------------------------------------------------------------
// q-exponential operator identities

// sum_n w(n) f(q^n x) t^n / (q;q)_n as a series in t
inline SeriesT shifted_values_series(const Env& e, const FunctionHandle& f, const Scalar& x, const Scalar& a,
                                     const std::function<Scalar(std::size_t)>& w) {
  ScalarList qq = e.qq(e.N);
  return series_from(e, [&](std::size_t n) { return w(n) * f(x * e.qn(static_cast<long>(n)), a) / qq[n]; });
}

inline Identity plain_operator_exponential() {
  Identity id;
  id.id = "I-1.1";
  id.citation = "q-exponential operator identity for x + eta_x";
  id.mode = Mode::CoeffT;
  id.params = params({"x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    for (const auto& f : univariate_functions()) append(out, expq_op_series_t(OperatorKind::DeltaPlain, f, p["x"], e.zero(), e.q, e.N));
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar x = p["x"];
    ScalarList out;
    for (const auto& f : univariate_functions())
      append(out, ps_mul(e.inv_pinf_t(x), shifted_values_series(e, f, x, e.zero(), [&](std::size_t) { return e.one(); })));
    return out;
  };
  return id;
}

inline Identity operator_exponential(OperatorKind kind) {
  Identity id;
  bool delta = kind == OperatorKind::Delta;
  id.id = delta ? "I-1.2a" : "I-1.2b";
  id.citation = delta ? "q-exponential operator identity for Delta_{x,a}" : "q-exponential operator identity for Omega_{x,a}";
  id.mode = Mode::CoeffT;
  id.params = params({"a", "x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [kind](const Point& p) {
    Env e(p);
    ScalarList out;
    for (const auto& f : univariate_functions()) append(out, expq_op_series_t(kind, f, p["x"], p["a"], e.q, e.N));
    return out;
  };
  id.rhs = [delta](const Point& p) {
    Env e(p);
    Scalar a = p["a"], x = p["x"];
    ScalarList out;
    for (const auto& f : univariate_functions()) {
      if (delta) {
        SeriesT sum = shifted_values_series(e, f, x, a, [&](std::size_t) { return e.one(); });
        append(out, mul({e.pinf_t(a * x), e.inv_pinf_t(x), sum}));
      } else {
        SeriesT sum = shifted_values_series(e, f, x, a, [&](std::size_t n) { return e.poch(a, n); });
        append(out, ps_mul(e.inv_pinf_t(x), sum));
      }
    }
    return out;
  };
  return id;
}

inline FunctionHandle constant_one() {
  return {[](const Scalar& x, const Scalar&) { return Scalar(1, x.prec()); }, "1"};
}

inline Identity exponential_of_one() {
  Identity id;
  id.id = "I-2.1";
  id.citation = "q-exponential operators applied to the constant 1";
  id.mode = Mode::CoeffT;
  id.params = params({"a", "x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    append(out, expq_op_series_t(OperatorKind::Delta, constant_one(), p["x"], p["a"], e.q, e.N));
    append(out, expq_op_series_t(OperatorKind::Omega, constant_one(), p["x"], p["a"], e.q, e.N));
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], x = p["x"];
    ScalarList out;
    SeriesT base = ps_mul(e.inv_pinf_t(e.one()), e.inv_pinf_t(x));
    append(out, ps_mul(e.pinf_t(a * x), base));
    append(out, ps_mul(e.pinf_t(a), base));
    return out;
  };
  return id;
}

// Two successive q-exponentials applied to 1, as a series in (t, s): the
// coefficient of t^i s^j is T_{x,b}^j T_{x,a}^i 1 / ((q;q)_i (q;q)_j).
inline SeriesTS double_exponential_of_one(const Env& e, OperatorKind kind, const Scalar& a, const Scalar& b,
                                          const Scalar& x) {
  ScalarList qq = e.qq(e.N);
  SeriesTS r(e.N, e.N, e.prec);
  const QValue& q = e.q;
  for (std::size_t i = 0; i <= e.N; ++i) {
    FunctionHandle inner{[&, i](const Scalar& X, const Scalar&) { return op_pow_closed(kind, i, constant_one(), X, a, q); },
                         "inner"};
    for (std::size_t j = 0; j <= e.N; ++j) r.at(i, j) = op_pow_closed(kind, j, inner, x, b, q) / (qq[i] * qq[j]);
  }
  return r;
}

inline Identity double_exponential(OperatorKind kind) {
  Identity id;
  bool delta = kind == OperatorKind::Delta;
  id.id = delta ? "I-2.2a" : "I-2.2b";
  id.citation = delta ? "two Delta q-exponentials with different parameters, 1phi1 form"
                      : "two Omega q-exponentials with different parameters, 1phi1 form";
  id.mode = Mode::CoeffTS;
  id.params = params({"a", "b", "x"});
  id.domain = [](const Point& p) { return !(p.rational("a") == p.rational("b")); };
  id.lhs = [kind](const Point& p) {
    Env e(p);
    ScalarList out;
    append(out, double_exponential_of_one(e, kind, p["a"], p["b"], p["x"]));
    return out;
  };
  id.rhs = [delta](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], x = p["x"];
    ScalarList qq = e.qq(e.N);
    // prefactor: t-part times s-part
    SeriesT tpart = mul({delta ? e.pinf_t(a * x) : e.pinf_t(a), e.inv_pinf_t(e.one()), e.inv_pinf_t(x)});
    SeriesT spart = mul({delta ? e.pinf_t(b * x) : e.pinf_t(b), e.inv_pinf_t(e.one()), e.inv_pinf_t(x)});
    SeriesTS pre = SeriesTS::outer(tpart, spart);
    // 1phi1(c; c' ; q, xts) with c' = axt (Delta) or bs (Omega)
    SeriesTS phi11(e.N, e.N, e.prec);
    for (std::size_t n = 0; n <= e.N; ++n) {
      long nn = static_cast<long>(n);
      Scalar c = (delta ? e.poch(a, n) : e.poch(b, n)) * e.sq(nn) * pow(x, nn) / qq[n];
      SeriesT mono(e.N, e.prec);
      mono[n] = e.one();
      SeriesT lower = ps_shift(ps_inv(e.poch_t(delta ? a * x : b, n)), n);
      SeriesTS term = delta ? SeriesTS::outer(lower, mono) : SeriesTS::outer(mono, lower);
      term *= c;
      phi11 += term;
    }
    ScalarList out;
    append(out, ps_mul(pre, phi11));
    return out;
  };
  return id;
}

inline Identity hahn_operator_representation() {
  Identity id;
  id.id = "I-2.3";
  id.citation = "operator powers of 1 are homogeneous Hahn polynomials";
  id.params = params({"a", "x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    for (std::size_t n = 0; n <= e.N; ++n) {
      out.push_back(op_pow_iter(OperatorKind::Delta, n, constant_one(), p["x"], p["a"], e.q));
      out.push_back(op_pow_iter(OperatorKind::Omega, n, constant_one(), p["x"], p["a"], e.q));
    }
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    for (std::size_t n = 0; n <= e.N; ++n) {
      out.push_back(phi(n, p["a"], p["x"], e.one(), e.q));
      out.push_back(phi(n, p["a"], e.one(), p["x"], e.q));
    }
    return out;
  };
  return id;
}

inline Identity hahn_index_shift() {
  Identity id;
  id.id = "I-2.4";
  id.citation = "operator powers raise the index of Hahn polynomials";
  id.params = params({"a", "x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    const QValue& q = e.q;
    ScalarList out;
    for (std::size_t m = 0; m <= 6; ++m) {
      FunctionHandle fx{[&q, m](const Scalar& X, const Scalar& A) { return phi(m, A, X, Scalar(1, X.prec()), q); }, "Phi(x,1)"};
      FunctionHandle f1{[&q, m](const Scalar& X, const Scalar& A) { return phi(m, A, Scalar(1, X.prec()), X, q); }, "Phi(1,x)"};
      for (std::size_t n = 0; n <= 6; ++n) {
        out.push_back(op_pow_iter(OperatorKind::Delta, n, fx, p["x"], p["a"], q));
        out.push_back(op_pow_iter(OperatorKind::Omega, n, f1, p["x"], p["a"], q));
      }
    }
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    for (std::size_t m = 0; m <= 6; ++m)
      for (std::size_t n = 0; n <= 6; ++n) {
        out.push_back(phi(m + n, p["a"], p["x"], e.one(), e.q));
        out.push_back(phi(m + n, p["a"], e.one(), p["x"], e.q));
      }
    return out;
  };
  return id;
}

inline FunctionHandle4 constant_one4() {
  return {[](const Scalar& x, const Scalar&, const Scalar&, const Scalar&) { return Scalar(1, x.prec()); }, "1"};
}

inline Identity composed_exponential_of_one() {
  Identity id;
  id.id = "I-2.5";
  id.citation = "composed operator exponentials of 1 as bilinear Hahn sums";
  id.mode = Mode::CoeffT;
  id.params = params({"a", "b", "x", "y"});
  id.domain = [](const Point& p) { return !(p.rational("a") == p.rational("b")); };
  id.lhs = [](const Point& p) {
    Env e(p);
    ScalarList qq = e.qq(e.N), out;
    for (auto kind : {OperatorKind::Delta, OperatorKind::Omega}) {
      auto pw = composed_pow_table(kind, ActFirst::Y, e.N, constant_one4(), p["x"], p["y"], p["a"], p["b"], e.q);
      for (std::size_t n = 0; n <= e.N; ++n) out.push_back(pw[n] / qq[n]);
    }
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], x = p["x"], y = p["y"], one = e.one();
    ScalarList qq = e.qq(e.N), out;
    for (std::size_t n = 0; n <= e.N; ++n) out.push_back(phi(n, a, x, one, e.q) * phi(n, b, y, one, e.q) / qq[n]);
    for (std::size_t n = 0; n <= e.N; ++n) out.push_back(phi(n, a, one, x, e.q) * phi(n, b, one, y, e.q) / qq[n]);
    return out;
  };
  return id;
}

inline Identity exponential_by_qderivatives() {
  Identity id;
  id.id = "I-2.6";
  id.citation = "q-exponential operators expanded in q-derivatives";
  id.params = params({"a", "x", "t"});
  // |t| <= 1/2 keeps the defining series short; the statement needs |t|, |xt| < 1
  id.domain = [](const Point& p) {
    double a = p.approx("a"), x = p.approx("x"), t = p.approx("t");
    return below(t, 0.51) && below(x * t, 0.9) && below(a * t, 0.9);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    for (auto kind : {OperatorKind::Delta, OperatorKind::Omega})
      for (const auto& f : univariate_functions())
        out.push_back(expq_op(kind, p["t"], f, p["x"], p["a"], e.q, ExpMode::Series, e.tail));
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    for (auto kind : {OperatorKind::Delta, OperatorKind::Omega})
      for (const auto& f : univariate_functions())
        out.push_back(expq_op(kind, p["t"], f, p["x"], p["a"], e.q, ExpMode::QDeriv, e.tail));
    return out;
  };
  return id;
}

inline Identity delta_power_by_qderivatives() {
  Identity id;
  id.id = "I-2.7";
  id.citation = "Delta_{x,a}^n f expanded in q-derivatives and Hahn polynomials";
  id.params = params({"a", "x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    for (const auto& f : univariate_functions())
      for (std::size_t n = 0; n <= 8; ++n) out.push_back(op_pow_iter(OperatorKind::Delta, n, f, p["x"], p["a"], e.q));
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], x = p["x"];
    ScalarList out;
    for (const auto& f : univariate_functions()) {
      ScalarList d = qderiv_table(f, x, a, e.q, 8);
      for (std::size_t n = 0; n <= 8; ++n) {
        Scalar s = e.zero();
        for (std::size_t k = 0; k <= n; ++k)
          s += e.gb(n, k) * pow(-x, static_cast<long>(k)) * e.qn(binom2(static_cast<long>(k))) *
               phi(n - k, a, x, e.one(), e.q) * d[k];
        out.push_back(s);
      }
    }
    return out;
  };
  return id;
}

// D_x^k f(x, a q^j) for j <= 2 * 8, k <= 8
inline std::vector<ScalarList> qderiv_grid(const Env& e, const FunctionHandle& f, const Scalar& x, const Scalar& a) {
  std::vector<ScalarList> g;
  for (std::size_t j = 0; j <= 16; ++j) g.push_back(qderiv_table(f, x, a * e.qn(static_cast<long>(j)), e.q, 8));
  return g;
}

inline Identity two_variable_power_expansion() {
  Identity id;
  id.id = "I-2.8";
  id.citation = "operator powers of a function of x and a expanded in q-derivatives";
  id.params = params({"a", "x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    for (const auto& f : two_variable_functions())
      for (std::size_t n = 0; n <= 8; ++n) {
        out.push_back(op_pow_iter(OperatorKind::Delta, n, f, p["x"], p["a"], e.q));
        out.push_back(op_pow_iter(OperatorKind::Omega, n, f, p["x"], p["a"], e.q));
      }
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], x = p["x"];
    ScalarList out;
    for (const auto& f : two_variable_functions()) {
      auto D = qderiv_grid(e, f, x, a);
      for (std::size_t n = 0; n <= 8; ++n) {
        Scalar d = e.zero(), o = e.zero();
        for (std::size_t k = 0; k <= n; ++k) {
          long kk = static_cast<long>(k);
          Scalar common = e.gb(n, k) * e.sq(kk) * pow(x, kk);
          Scalar sd = e.zero(), so = e.zero();
          Scalar aqk = a * e.qn(kk);
          for (std::size_t j = 0; j <= n - k; ++j) {
            long jj = static_cast<long>(j);
            sd += e.gb(n - k, j) * e.poch(a, j) * pow(x, jj) * D[j][k];
            so += e.gb(n - k, j) * e.poch(aqk, j) * pow(x, static_cast<long>(n - k - j)) * D[j + k][k];
          }
          d += common * sd;
          o += common * e.poch(a, k) * so;
        }
        out.push_back(d);
        out.push_back(o);
      }
    }
    return out;
  };
  return id;
}

// Truncation of the composed q-exponentials (total index <= kComposedOrder).
inline constexpr std::size_t kComposedOrder = 24;

// sum_{n <= K} t^n/(q;q)_n (T_y T_x)^n f
inline Scalar composed_exponential_truncated(const Env& e, OperatorKind kind, const FunctionHandle4& f, const Point& p) {
  Scalar x = p["x"], y = p["y"], a = p["a"], b = p["b"], t = p["t"];
  ActFirst first = kind == OperatorKind::Delta ? ActFirst::X : ActFirst::Y;
  auto pw = composed_pow_table(kind, first, kComposedOrder, f, x, y, a, b, e.q);
  ScalarList qq = e.qq(kComposedOrder);
  Scalar s = e.zero();
  for (std::size_t n = 0; n <= kComposedOrder; ++n) s += pow(t, static_cast<long>(n)) / qq[n] * pw[n];
  return s;
}

// The quadruple sums over s + k + l + n <= K. `shift` maps (s, k, l, n) to
// the exponents (i, j, u, v) of f(x q^i, y q^j, a q^u, b q^v).
using ShiftMap = std::function<std::array<long, 4>(long s, long k, long l, long n)>;

inline Scalar quadruple_sum(const Env& e, OperatorKind kind, const FunctionHandle4& f, const Point& p, const ShiftMap& shift) {
  Scalar x = p["x"], y = p["y"], a = p["a"], b = p["b"], t = p["t"];
  long K = static_cast<long>(kComposedOrder);
  ScalarList qq = e.qq(kComposedOrder);
  PochTable pa(a, e), pb(b, e);
  Scalar total = e.zero();
  for (long s = 0; s <= K; ++s)
    for (long k = 0; s + k <= K; ++k)
      for (long l = 0; s + k + l <= K; ++l)
        for (long n = 0; s + k + l + n <= K; ++n) {
          Scalar c = pa[static_cast<std::size_t>(s + k)] * pb[static_cast<std::size_t>(s + l)] * pow(t, s + k + l + n);
          if (kind == OperatorKind::Delta)
            c *= pow(x, s + k) * pow(y, s + l) * e.qn(k * l);
          else
            c *= pow(x, l + n) * pow(y, k + n) * e.qn(s * n);
          c /= qq[static_cast<std::size_t>(s)] * qq[static_cast<std::size_t>(k)] * qq[static_cast<std::size_t>(l)] *
               qq[static_cast<std::size_t>(n)];
          auto sh = shift(s, k, l, n);
          total += c * f(x * e.qn(sh[0]), y * e.qn(sh[1]), a * e.qn(sh[2]), b * e.qn(sh[3]));
        }
  return total;
}

inline ShiftMap delta_shifts() {
  return [](long s, long k, long l, long n) { return std::array<long, 4>{n + l, n + k, s + k, s + l}; };
}

inline ShiftMap omega_shifts() {
  return [](long s, long k, long l, long) { return std::array<long, 4>{s + k, s + l, s + k, s + l}; };
}

inline Identity composed_quadruple(OperatorKind kind) {
  Identity id;
  bool delta = kind == OperatorKind::Delta;
  id.id = delta ? "I-2.9" : "I-2.10";
  id.citation = delta ? "exp_q(t Delta_{y,b} Delta_{x,a}) f as a quadruple sum"
                      : "exp_q(t Omega_{x,a} Omega_{y,b}) f as a quadruple sum";
  id.params = params({"a", "b", "x", "y", "t"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [kind](const Point& p) {
    Env e(p);
    ScalarList out;
    for (const auto& f : four_variable_functions()) out.push_back(composed_exponential_truncated(e, kind, f, p));
    return out;
  };
  id.rhs = [kind, delta](const Point& p) {
    Env e(p);
    ScalarList out;
    for (const auto& f : four_variable_functions())
      out.push_back(quadruple_sum(e, kind, f, p, delta ? delta_shifts() : omega_shifts()));
    return out;
  };
  return id;
}

// ---------------------------------------------------------------------------
// Homogeneous Hahn polynomials

// (axt, byt;q)_inf / (t, xt, yt;q)_inf 3phi2(a, b, t; axt, byt; q, xyt) in t
inline SeriesT mehler_series(const Env& e, const Scalar& a, const Scalar& b, const Scalar& x, const Scalar& y) {
  ScalarList qq = e.qq(e.N);
  SeriesT pre = mul({e.pinf_t(a * x), e.pinf_t(b * y), e.inv_pinf_t(e.one()), e.inv_pinf_t(x), e.inv_pinf_t(y)});
  SeriesT sum(e.N, e.prec);
  for (std::size_t n = 0; n <= e.N; ++n) {
    long nn = static_cast<long>(n);
    SeriesT term = mul({e.poch_t(e.one(), n), ps_inv(e.poch_t(a * x, n)), ps_inv(e.poch_t(b * y, n))});
    term = ps_shift(term, n);
    Scalar c = e.poch(a, n) * e.poch(b, n) * pow(x * y, nn) / qq[n];
    for (std::size_t i = 0; i <= e.N; ++i) sum[i] += c * term[i];
  }
  return ps_mul(pre, sum);
}

inline Identity composed_exponential_mehler() {
  Identity id;
  id.id = "I-3.1";
  id.citation = "exp_q(t Delta_{y,b} Delta_{x,a}) 1 as a 3phi2";
  id.mode = Mode::CoeffT;
  id.params = params({"a", "b", "x", "y"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    ScalarList qq = e.qq(e.N), out;
    auto pw = composed_pow_table(OperatorKind::Delta, ActFirst::X, e.N, constant_one4(), p["x"], p["y"], p["a"], p["b"], e.q);
    for (std::size_t n = 0; n <= e.N; ++n) out.push_back(pw[n] / qq[n]);
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    append(out, mehler_series(e, p["a"], p["b"], p["x"], p["y"]));
    return out;
  };
  return id;
}

inline Identity q_mehler() {
  Identity id;
  id.id = "I-3.2";
  id.citation = "q-Mehler formula for the Hahn polynomials";
  id.mode = Mode::CoeffT;
  id.params = params({"a", "b", "x", "y"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], x = p["x"], y = p["y"];
    ScalarList qq = e.qq(e.N), out;
    for (std::size_t n = 0; n <= e.N; ++n) out.push_back(phi(n, a, x, e.one(), e.q) * phi(n, b, y, e.one(), e.q) / qq[n]);
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    ScalarList out;
    append(out, mehler_series(e, p["a"], p["b"], p["x"], p["y"]));
    return out;
  };
  return id;
}

inline Identity q_mehler_reversed() {
  Identity id;
  id.id = "I-3.3";
  id.citation = "q-Mehler formula for Phi_n^{(a)}(1, x|q)";
  id.mode = Mode::CoeffT;
  id.params = params({"a", "b", "x", "y"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], x = p["x"], y = p["y"];
    ScalarList qq = e.qq(e.N), out;
    for (std::size_t n = 0; n <= e.N; ++n) out.push_back(phi(n, a, e.one(), x, e.q) * phi(n, b, e.one(), y, e.q) / qq[n]);
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], x = p["x"], y = p["y"];
    ScalarList qq = e.qq(e.N);
    SeriesT pre = mul({e.pinf_t(a * y), e.pinf_t(b * x), e.inv_pinf_t(x), e.inv_pinf_t(y), e.inv_pinf_t(x * y)});
    SeriesT sum(e.N, e.prec);
    for (std::size_t n = 0; n <= e.N; ++n) {
      SeriesT term = mul({e.poch_t(x * y, n), ps_inv(e.poch_t(a * y, n)), ps_inv(e.poch_t(b * x, n))});
      term = ps_shift(term, n);
      Scalar c = e.poch(a, n) * e.poch(b, n) / qq[n];
      for (std::size_t i = 0; i <= e.N; ++i) sum[i] += c * term[i];
    }
    ScalarList out;
    append(out, ps_mul(pre, sum));
    return out;
  };
  return id;
}

/// Phi_0, Phi_1, ... at fixed arguments, extended on demand.
class HahnTable {
 public:
  HahnTable(Scalar a, Scalar x, Scalar y, const QValue& q) : a_(std::move(a)), x_(std::move(x)), y_(std::move(y)), q_(q) {}
  const Scalar& operator[](std::size_t n) {
    while (v_.size() <= n) v_.push_back(phi(v_.size(), a_, x_, y_, q_));
    return v_[n];
  }

 private:
  Scalar a_, x_, y_;
  const QValue& q_;
  std::deque<Scalar> v_;
};

inline Identity shifted_mehler() {
  Identity id;
  id.id = "I-3.4";
  id.citation = "q-Mehler formula with shifted indices, Phi_n^{(a)}(x, 1|q)";
  id.params = params({"a", "b", "x", "y", "t"});
  id.domain = [](const Point& p) {
    double t = p.approx("t");
    return below(t, 0.51) && below(p.approx("x") * t, 0.9) && below(p.approx("y") * t, 0.9);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar t = p["t"];
    HahnTable ha(p["a"], p["x"], e.one(), e.q), hb(p["b"], p["y"], e.one(), e.q);
    ScalarList out;
    for (std::size_t m = 0; m <= 3; ++m)
      for (std::size_t n = 0; n <= 3; ++n) {
        Scalar qq = e.one();
        out.push_back(sum_until(e, [&](std::size_t k) {
          if (k > 0) qq *= 1 - e.qn(static_cast<long>(k));
          return ha[n + k] * hb[m + k] * pow(t, static_cast<long>(k)) / qq;
        }));
      }
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], x = p["x"], y = p["y"], t = p["t"];
    Scalar pre = e.pinf({a * x * t, b * y * t}) / e.pinf({t, x * t, y * t});
    ScalarList out;
    for (std::size_t m = 0; m <= 3; ++m)
      for (std::size_t n = 0; n <= 3; ++n) {
        Scalar total = e.zero();
        for (std::size_t k = 0; k <= m; ++k)
          for (std::size_t j = 0; j <= n; ++j) {
            long shift = static_cast<long>(m + n - k - j);
            Scalar c = e.gb(m, k) * e.gb(n, j) * e.poch(x * t, n - j) * e.poch(y * t, m - k) * pow(x, static_cast<long>(j)) *
                       pow(y, static_cast<long>(k));
            // sum_l (a)_{j+l} (b)_{k+l} (t)_l / ((q)_l (axt)_{n+l} (byt)_{m+l}) z^l
            Scalar lead = e.poch(a, j) * e.poch(b, k) / (e.poch(a * x * t, n) * e.poch(b * y * t, m));
            Scalar inner = e.rphi({a * e.qn(static_cast<long>(j)), b * e.qn(static_cast<long>(k)), t},
                                  {a * x * t * e.qn(static_cast<long>(n)), b * y * t * e.qn(static_cast<long>(m))},
                                  x * y * t * e.qn(shift));
            total += c * lead * inner;
          }
        out.push_back(pre * total);
      }
    return out;
  };
  return id;
}

inline Identity shifted_mehler_reversed() {
  Identity id;
  id.id = "I-3.5";
  id.citation = "q-Mehler formula with shifted indices, Phi_n^{(a)}(1, x|q)";
  id.params = params({"a", "b", "x", "y", "t"});
  id.domain = [](const Point& p) {
    double t = p.approx("t"), x = p.approx("x"), y = p.approx("y");
    return below(t, 0.51) && below(x * t, 0.9) && below(y * t, 0.9) && below(x * y * t, 0.9);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar t = p["t"];
    HahnTable ha(p["a"], e.one(), p["x"], e.q), hb(p["b"], e.one(), p["y"], e.q);
    ScalarList out;
    for (std::size_t m = 0; m <= 3; ++m)
      for (std::size_t n = 0; n <= 3; ++n) {
        Scalar qq = e.one();
        out.push_back(sum_until(e, [&](std::size_t k) {
          if (k > 0) qq *= 1 - e.qn(static_cast<long>(k));
          return ha[n + k] * hb[m + k] * pow(t, static_cast<long>(k)) / qq;
        }));
      }
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], x = p["x"], y = p["y"], t = p["t"];
    Scalar pre = e.pinf({a * t * y, b * t * x}) / e.pinf({x * t, y * t, x * y * t});
    ScalarList out;
    for (std::size_t m = 0; m <= 3; ++m)
      for (std::size_t n = 0; n <= 3; ++n) {
        Scalar total = e.zero();
        for (std::size_t k = 0; k <= m; ++k)
          for (std::size_t j = 0; j <= n; ++j) {
            std::size_t kj = k + j;
            long lkj = static_cast<long>(kj);
            Scalar c = e.gb(m, k) * e.gb(n, j) * e.poch(x * t, j) * e.poch(y * t, k) *
                       pow(x, static_cast<long>(n - j)) * pow(y, static_cast<long>(m - k));
            // sum_l (a)_{j+l} (b)_{k+l} (xyt)_{k+j+l} t^l / ((q)_l (aty)_{k+j+l} (btx)_{k+j+l})
            Scalar lead = e.poch(a, j) * e.poch(b, k) * e.poch(x * y * t, kj) / (e.poch(a * t * y, kj) * e.poch(b * t * x, kj));
            Scalar inner = e.rphi({a * e.qn(static_cast<long>(j)), b * e.qn(static_cast<long>(k)), x * y * t * e.qn(lkj)},
                                  {a * t * y * e.qn(lkj), b * t * x * e.qn(lkj)}, t);
            total += c * lead * inner;
          }
        out.push_back(pre * total);
      }
    return out;
  };
  return id;
}

inline Identity hahn_product_formulas() {
  Identity id;
  id.id = "I-3.6";
  id.citation = "product formulas for Phi_{m+n}^{(a)}";
  id.params = params({"a", "x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], x = p["x"];
    ScalarList out;
    for (std::size_t m = 0; m <= 6; ++m)
      for (std::size_t n = 0; n <= 6; ++n) {
        out.push_back(phi(m + n, a, x, e.one(), e.q));
        out.push_back(phi(m + n, a, e.one(), x, e.q));
      }
    return out;
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], x = p["x"], one = e.one();
    ScalarList out;
    for (std::size_t m = 0; m <= 6; ++m)
      for (std::size_t n = 0; n <= 6; ++n) {
        Scalar first = e.zero(), second = e.zero();
        for (std::size_t k = 0; k <= std::min(m, n); ++k) {
          long kk = static_cast<long>(k);
          Scalar aqk = a * e.qn(kk);
          Scalar c = e.gb(n, k) * e.gb(m, k) * e.poch(e.qv, k) * e.sq(kk) * pow(x, kk);
          first += c * e.poch(a, k) * phi(n - k, a, x, one, e.q) * phi(m - k, aqk, x, one, e.q);
          second += c * e.poch(a, k) * e.poch(a, k) * phi(n - k, aqk, one, x, e.q) * phi(m - k, aqk, one, x, e.q);
        }
        out.push_back(first);
        out.push_back(second);
      }
    return out;
  };
  return id;
}

// ---------------------------------------------------------------------------
// Applications

inline Identity two_phi_two_transformation() {
  Identity id;
  id.id = "I-4.1";
  id.citation = "2phi2 transformation exchanging s and t";
  id.params = params({"a", "x", "s", "t"});
  id.domain = [](const Point& p) {
    double ax = p.approx("a") * p.approx("x");
    return below(ax * p.approx("t"), 0.9) && below(ax * p.approx("s"), 0.9);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], x = p["x"], s = p["s"], t = p["t"];
    return ScalarList{e.rphi({x * s, s}, {a * s * x, x * t * s}, a * x * t)};
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], x = p["x"], s = p["s"], t = p["t"];
    return ScalarList{e.pinf(a * x * t) / e.pinf(a * x * s) * e.rphi({x * t, t}, {a * x * t, x * t * s}, a * x * s)};
  };
  return id;
}

inline Identity heine_second() {
  Identity id;
  id.id = "I-4.2";
  id.citation = "Heine's second transformation";
  id.params = params({"a", "b", "c", "z"});
  id.domain = [](const Point& p) {
    double b = p.approx("b"), c = p.approx("c"), z = p.approx("z");
    return below(c, 0.9) && below(z, 0.9) && below(c / b, 0.9);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    return ScalarList{e.rphi({p["a"], p["b"]}, {p["c"]}, p["z"])};
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], c = p["c"], z = p["z"];
    return ScalarList{e.pinf({c / b, b * z}) / e.pinf({c, z}) * e.rphi({a * b * z / c, b}, {b * z}, c / b)};
  };
  return id;
}

// Both claims: for each f and n <= 8 the psi-weighted sum of Delta powers
// against (-x)^n q^{C(n,2)} D^n f, then the vanishing sums for 1 <= n <= 10.
struct PsiSums {
  ScalarList lhs, rhs, scale;
};

inline PsiSums psi_operator_sums(const Point& p) {
  Env e(p);
  Scalar a = p["a"], x = p["x"];
  PsiSums out;
  ScalarList psis;
  for (std::size_t k = 0; k <= 10; ++k) psis.push_back(psi(k, a, x, e.q));
  for (const auto& f : univariate_functions()) {
    ScalarList d = qderiv_table(f, x, a, e.q, 8);
    for (std::size_t n = 0; n <= 8; ++n) {
      Scalar s = e.zero(), big = e.zero();
      for (std::size_t k = 0; k <= n; ++k) {
        Scalar term = e.gb(n, k) * e.sq(static_cast<long>(k)) * psis[k] * op_pow_closed(OperatorKind::Delta, n - k, f, x, a, e.q);
        s += term;
        big = max(big, abs(term));
      }
      long nn = static_cast<long>(n);
      out.lhs.push_back(s);
      out.rhs.push_back(pow(-x, nn) * e.qn(binom2(nn)) * d[n]);
      out.scale.push_back(big);
    }
  }
  for (std::size_t n = 1; n <= 10; ++n) {
    Scalar s = e.zero(), big = e.zero();
    for (std::size_t k = 0; k <= n; ++k) {
      Scalar term = e.gb(n, k) * e.sq(static_cast<long>(k)) * psis[k] * phi(n - k, a, x, e.one(), e.q);
      s += term;
      big = max(big, abs(term));
    }
    out.lhs.push_back(s);
    out.rhs.push_back(e.zero());
    out.scale.push_back(big);
  }
  return out;
}

inline Identity psi_operator_identity() {
  Identity id;
  id.id = "I-4.3";
  id.citation = "Al-Salam-Carlitz polynomials against powers of Delta_{x,a}";
  id.params = params({"a", "x"});
  id.domain = [](const Point&) { return true; };
  id.lhs = [](const Point& p) { return psi_operator_sums(p).lhs; };
  id.rhs = [](const Point& p) { return psi_operator_sums(p).rhs; };
  id.scale = [](const Point& p) { return psi_operator_sums(p).scale; };
  return id;
}

inline Identity generalized_vs_plain_operator() {
  Identity id;
  id.id = "I-4.4";
  id.citation = "triple q-exponential relation between Delta_{x,a} and x + eta_x";
  id.params = params({"a", "x", "s", "t"});
  // the statement needs |a|, |s|, |t| < 1; 1/2 bounds keep the double sums short
  id.domain = [](const Point& p) {
    return below(p.approx("a"), 0.51) && below(p.approx("s"), 0.51) && below(p.approx("t"), 0.51);
  };
  id.lhs = [](const Point& p) {
    // exp_q(a Delta_x) 1 = 1/(a, ax;q)_inf times exp_q(s Delta_{x,a}) g with
    // g(x, a) = (axt;q)_inf/(t, xt;q)_inf, through the expanded powers
    // sum_k (a;q)_k (xs)^k/(q;q)_k sum_n s^n/(q;q)_n g(x q^n, a q^k).
    Env e(p);
    Scalar a = p["a"], x = p["x"], s = p["s"], t = p["t"];
    PochTable pxt(x * t, e), paxt(a * x * t, e), pa(a, e), pq(e.qv, e);
    Scalar g0 = e.pinf(a * x * t) / e.pinf({t, x * t});
    Scalar xs = x * s;
    Scalar outer = sum_until(e, [&](std::size_t k) {
      Scalar inner = sum_until(e, [&](std::size_t n) { return pow(s, static_cast<long>(n)) / pq[n] * pxt[n] / paxt[n + k]; });
      return pa[k] * pow(xs, static_cast<long>(k)) / pq[k] * inner;
    });
    return ScalarList{g0 * outer / e.pinf({a, a * x})};
  };
  id.rhs = [](const Point& p) {
    // exp_q(t Delta_x) exp_q(s Delta_x) exp_q(a Delta_x) 1, each through
    // exp_q(t Delta_x) h(x) = 1/(xt;q)_inf sum_m t^m h(q^m x)/(q;q)_m.
    Env e(p);
    Scalar a = p["a"], x = p["x"], s = p["s"], t = p["t"];
    PochTable pxs(x * s, e), pax(a * x, e), pq(e.qv, e);
    Scalar outer = sum_until(e, [&](std::size_t m) {
      Scalar inner = sum_until(e, [&](std::size_t n) { return pow(s, static_cast<long>(n)) / pq[n] * pax[m + n]; });
      return pow(t, static_cast<long>(m)) * pxs[m] / pq[m] * inner;
    });
    return ScalarList{outer / e.pinf({x * t, x * s, a, a * x})};
  };
  return id;
}

// ---------------------------------------------------------------------------
// q-Gauss generalizations

// sum_n (a, b;q)_n/(q, c;q)_n (c/ab)^n 2phi1(c/a, b q^n; c q^n; q, az)
inline Scalar generalized_gauss_lhs(const Env& e, const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& z) {
  Scalar ratio = c / (a * b);
  Scalar coef = e.one();
  return sum_until(e, [&](std::size_t n) {
    long nn = static_cast<long>(n);
    if (n > 0) coef *= (1 - a * e.qn(nn - 1)) * (1 - b * e.qn(nn - 1)) / ((1 - e.qn(nn)) * (1 - c * e.qn(nn - 1))) * ratio;
    return coef * e.rphi({c / a, b * e.qn(nn)}, {c * e.qn(nn)}, a * z);
  });
}

inline Identity generalized_gauss() {
  Identity id;
  id.id = "I-5.1";
  id.citation = "generalized q-Gauss summation with a 2phi1 weight";
  id.params = params({"a", "b", "c", "z"});
  id.domain = [](const Point& p) {
    double a = p.approx("a"), b = p.approx("b"), c = p.approx("c"), z = p.approx("z");
    return below(c / (a * b), 0.51) && below(a * z, 0.9);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    return ScalarList{generalized_gauss_lhs(e, p["a"], p["b"], p["c"], p["z"])};
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], b = p["b"], c = p["c"], z = p["z"];
    return ScalarList{e.pinf({c / a, c / b, a * b * z}) / e.pinf({c, c / (a * b), a * z})};
  };
  return id;
}

/// sum_n (ut;q)_n x^n/(q;q)_n Theta_n, where `theta_for(n)` gives the double
/// series of the n-th term.
inline Scalar theta_outer_sum(const Env& e, const Scalar& u, const Scalar& t, const Scalar& x,
                              const std::function<ThetaSpec(std::size_t)>& theta_for) {
  Scalar coef = e.one();
  return sum_until(e, [&](std::size_t n) {
    long nn = static_cast<long>(n);
    if (n > 0) coef *= (1 - u * t * e.qn(nn - 1)) * x / (1 - e.qn(nn));
    return coef * theta_double(theta_for(n), e.tail);
  });
}

// Theta^{2:1;1}_{2:0;0}[a, utx : u t q^n ; 0 / atx, 0 : - ; -](s, t q^n)
inline ThetaSpec summation_theta(const Env& e, const Scalar& a, const Scalar& u, const Scalar& t, const Scalar& x,
                                 const Scalar& s, std::size_t n) {
  Scalar qn = e.qn(static_cast<long>(n));
  Scalar utx = u * t * x;
  return ThetaSpec{{a, utx}, {u * t * qn}, {e.zero()}, {a * t * x, e.zero()}, {}, {}, e.q, s, t * qn};
}

inline Identity new_summation() {
  Identity id;
  id.id = "I-5.2";
  id.citation = "q-summation formula from the operator Omega_{u,a}";
  id.params = params({"a", "u", "t", "x", "s"});
  // the statement needs |t|, |x|, |s|, |atx| < 1; 1/2 bounds keep the nested sums short
  id.domain = [](const Point& p) {
    return below(p.approx("t"), 0.51) && below(p.approx("x"), 0.51) && below(p.approx("s"), 0.51);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], u = p["u"], t = p["t"], x = p["x"], s = p["s"];
    return ScalarList{theta_outer_sum(e, u, t, x, [&](std::size_t n) { return summation_theta(e, a, u, t, x, s, n); })};
  };
  id.rhs = [](const Point& p) {
    Env e(p);
    Scalar a = p["a"], u = p["u"], t = p["t"], x = p["x"], s = p["s"];
    return ScalarList{e.pinf({a * s, t * x, u * t * x}) / e.pinf({x, s, a * t * x}) * e.rphi({a, u * s}, {a * s}, t)};
  };
  return id;
}

inline Identity new_summation_at_zero() {
  Identity id;
  id.id = "I-5.2r";
  id.citation = "q-summation formula at a = 0 against the generalized q-Gauss summation";
  id.params = params({"u", "t", "x", "s"});
  id.domain = [](const Point& p) {
    return below(p.approx("t"), 0.51) && below(p.approx("x"), 0.51) && below(p.approx("s"), 0.51);
  };
  id.lhs = [](const Point& p) {
    Env e(p);
    Scalar u = p["u"], t = p["t"], x = p["x"], s = p["s"];
    Scalar v = theta_outer_sum(e, u, t, x, [&](std::size_t n) { return summation_theta(e, e.zero(), u, t, x, s, n); });
    // at a = 0 the inner y-sum of each Theta is a q-binomial series; taking
    // its factor (u t^2 x;q)_inf/(t;q)_inf out leaves the displayed form
    v *= e.pinf(t) / e.pinf(u * t * t * x);
    return ScalarList{v, v};
  };
  id.rhs = [](const Point& p) {
    // a -> t, b -> ut, c -> u t^2 x, z -> s/t
    Env e(p);
    Scalar u = p["u"], t = p["t"], x = p["x"], s = p["s"];
    Scalar gauss = generalized_gauss_lhs(e, t, u * t, u * t * t * x, s / t);
    Scalar prod = e.pinf({t * x, u * t * x, u * s * t}) / e.pinf({x, s, u * t * t * x});
    return ScalarList{gauss, prod};
  };
  return id;
}

}  // namespace reg

/// Every registered identity, in report order.
inline const std::vector<Identity>& registry() {
  static const std::vector<Identity> all = [] {
    using namespace reg;
    return std::vector<Identity>{
        q_binomial(),
        euler_pair(),
        jackson(),
        q_gauss(),
        plain_operator_exponential(),
        operator_exponential(OperatorKind::Delta),
        operator_exponential(OperatorKind::Omega),
        exponential_of_one(),
        double_exponential(OperatorKind::Delta),
        double_exponential(OperatorKind::Omega),
        hahn_operator_representation(),
        hahn_index_shift(),
        composed_exponential_of_one(),
        exponential_by_qderivatives(),
        delta_power_by_qderivatives(),
        two_variable_power_expansion(),
        composed_quadruple(OperatorKind::Delta),
        composed_quadruple(OperatorKind::Omega),
        composed_exponential_mehler(),
        q_mehler(),
        q_mehler_reversed(),
        shifted_mehler(),
        shifted_mehler_reversed(),
        hahn_product_formulas(),
        two_phi_two_transformation(),
        heine_second(),
        psi_operator_identity(),
        generalized_vs_plain_operator(),
        generalized_gauss(),
        new_summation(),
        new_summation_at_zero(),
    };
  }();
  return all;
}

inline const Identity* find_identity(const std::string& id) {
  for (const auto& i : registry())
    if (i.id == id) return &i;
  return nullptr;
}

}  // namespace qhahn
