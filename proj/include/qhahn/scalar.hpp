#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qhahn {

inline constexpr long kDefaultPrec = 256;

/// Arbitrary-precision real with its own precision in bits.
///
/// Every value carries its precision; there is no global default that the
/// arithmetic reads. Binary operations round to the larger of the two
/// operand precisions. Compound assignment widens the left operand when the
/// right one is more precise.
class Scalar {
 public:
  explicit Scalar(long prec = kDefaultPrec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Scalar(long value, long prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, value, MPFR_RNDN);
  }
  Scalar(const Scalar& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Scalar(Scalar&& o) noexcept {
    // Steal the limbs; leave `o` as a valid 2-bit zero so its destructor is
    // harmless.
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, MPFR_PREC_MIN);
  }
  Scalar& operator=(const Scalar& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Scalar& operator=(Scalar&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Scalar() { mpfr_clear(v_); }

  static Scalar rational(std::int64_t num, std::int64_t den, long prec) {
    Scalar r(prec);
    mpfr_set_si(r.v_, static_cast<long>(num), MPFR_RNDN);
    mpfr_div_si(r.v_, r.v_, static_cast<long>(den), MPFR_RNDN);
    return r;
  }
  static Scalar parse(const std::string& text, long prec) {
    Scalar r(prec);
    mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN);
    return r;
  }
  static Scalar from_double(double d, long prec) {
    Scalar r(prec);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
  }
  // 2^e at the given precision.
  static Scalar exp2(long e, long prec) {
    Scalar r(1, prec);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
  }

  long prec() const { return static_cast<long>(mpfr_get_prec(v_)); }
  // Copy rounded to `prec` bits.
  Scalar with_prec(long prec) const {
    Scalar r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Decimal with `digits` significant digits in %g style.
  std::string to_string(int digits = 20) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }
  // Scientific notation with `digits` digits after the point.
  std::string to_sci(int digits = 6) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  Scalar& operator+=(const Scalar& o) {
    widen(o);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    widen(o);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    widen(o);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    widen(o);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Scalar& operator+=(long o) {
    mpfr_add_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  Scalar& operator-=(long o) {
    mpfr_sub_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  Scalar& operator*=(long o) {
    mpfr_mul_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  Scalar& operator/=(long o) {
    mpfr_div_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator+(Scalar a, long b) { return a += b; }
  friend Scalar operator-(Scalar a, long b) { return a -= b; }
  friend Scalar operator*(Scalar a, long b) { return a *= b; }
  friend Scalar operator/(Scalar a, long b) { return a /= b; }
  friend Scalar operator+(long a, Scalar b) { return b += a; }
  friend Scalar operator*(long a, Scalar b) { return b *= a; }
  friend Scalar operator-(long a, const Scalar& b) {
    Scalar r(b.prec());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Scalar operator/(long a, const Scalar& b) {
    Scalar r(b.prec());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Scalar operator-(Scalar a) {
    mpfr_neg(a.v_, a.v_, MPFR_RNDN);
    return a;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Scalar& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend bool operator<(const Scalar& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const Scalar& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }

  friend Scalar abs(Scalar a) {
    mpfr_abs(a.v_, a.v_, MPFR_RNDN);
    return a;
  }
  friend Scalar pow(const Scalar& a, long e) {
    Scalar r(a.prec());
    mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  friend Scalar log2(const Scalar& a) {
    Scalar r(a.prec());
    mpfr_log2(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Scalar max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(20); }

 private:
  void widen(const Scalar& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }

  mpfr_t v_;
};

using ScalarList = std::vector<Scalar>;

// |a - b| / max(|a|, |b|, floor)
inline Scalar relative_deviation(const Scalar& a, const Scalar& b, const Scalar& floor) {
  Scalar scale = max(max(abs(a), abs(b)), floor);
  return abs(a - b) / scale;
}

}  // namespace qhahn
