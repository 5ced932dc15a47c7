#include <gtest/gtest.h>

#include "qhahn/qcore.hpp"
#include "qhahn/rational.hpp"

using namespace qhahn;

namespace {

constexpr long P = 256;

Scalar R(std::int64_t n, std::int64_t d) { return Scalar::rational(n, d, P); }
QValue Q(std::int64_t n, std::int64_t d) { return QValue(R(n, d)); }

// Fixed-length product, independent of the adaptive stopping rule.
Scalar product_n(const Scalar& a, const Scalar& q, int n) {
  Scalar p(1, P), aq = a;
  for (int k = 0; k < n; ++k) {
    p *= 1 - aq;
    aq *= q;
  }
  return p;
}

void expect_close(const Scalar& a, const Scalar& b, double tol) {
  Scalar dev = relative_deviation(a, b, Scalar::exp2(-200, P));
  EXPECT_LT(dev.to_double(), tol) << a << " vs " << b;
}

}  // namespace

TEST(QValue, RejectsOutsideUnitDisc) {
  EXPECT_THROW(QValue(R(0, 1)), OutOfRange);
  EXPECT_THROW(QValue(R(1, 1)), OutOfRange);
  EXPECT_THROW(QValue(R(-3, 2)), OutOfRange);
  EXPECT_NO_THROW(QValue(R(-1, 2)));
}

TEST(TailConfig, Validates) {
  EXPECT_THROW(TailConfig(Scalar(0, P)), OutOfRange);
  EXPECT_THROW(TailConfig(R(1, 10), 0), OutOfRange);
}

TEST(Qpoch, SmallCases) {
  QValue q = Q(1, 2);
  EXPECT_EQ(qpoch(R(1, 3), q, 0), 1);
  EXPECT_EQ(qpoch(Scalar(1, P), q, 3), 0);
  EXPECT_EQ(qpoch(R(1, 2), q, 2), R(3, 8));
}

TEST(Qpoch, SplitsAtAnyIndex) {
  QValue q = Q(3, 7);
  Scalar a = R(-5, 9);
  for (std::size_t m = 0; m <= 20; m += 4)
    for (std::size_t n = 0; n <= 20; n += 5)
      expect_close(qpoch(a, q, m + n), qpoch(a, q, m) * qpoch(a * qpow(q.value(), static_cast<long>(m)), q, n), 1e-30);
}

TEST(QpochInf, ZeroIsOne) { EXPECT_EQ(qpoch_inf(Scalar(0, P), Q(1, 2), TailConfig::bits(100, P)), 1); }

TEST(QpochInf, MatchesLongFixedProduct) {
  Scalar got = qpoch_inf(R(1, 2), Q(1, 2), TailConfig(Scalar::parse("1e-12", P)));
  EXPECT_NEAR(got.to_double(), 0.288788095, 1e-9);
  Scalar tight = qpoch_inf(R(1, 2), Q(1, 2), TailConfig::bits(220, P));
  expect_close(tight, product_n(R(1, 2), R(1, 2), 400), 1e-60);
}

TEST(QpochInf, SplitProductConsistency) {
  QValue q = Q(1, 2);
  TailConfig tail = TailConfig::bits(220, P);
  Scalar whole = qpoch_inf(q.value(), q, tail);
  Scalar split = qpoch(q.value(), q, 40) * qpoch_inf(q.value() * qpow(q.value(), 40), q, tail);
  expect_close(whole, split, 1e-60);
}

TEST(QpochInf, RatioIsFinitePoch) {
  QValue q = Q(-5, 8);
  TailConfig tail = TailConfig::bits(220, P);
  Scalar a = R(7, 11);
  for (long n : {1, 5, 13}) expect_close(qpoch_inf(a, q, tail) / qpoch_inf(a * qpow(q.value(), n), q, tail), qpoch(a, q, n), 1e-55);
}

TEST(QpochInf, ReportsExhaustedBudget) {
  EXPECT_THROW(qpoch_inf(R(1, 2), Q(15, 16), TailConfig(Scalar::exp2(-200, P), 20)), TailNotReached);
}

TEST(GaussBinom, Values) {
  QValue q = Q(1, 2);
  EXPECT_EQ(gauss_binom(7, 0, q), 1);
  EXPECT_EQ(gauss_binom(4, 2, q), R(35, 16));
  expect_close(gauss_binom(5, 2, q), gauss_binom(5, 3, q), 1e-70);
  EXPECT_THROW(gauss_binom(2, 3, q), OutOfRange);
}

TEST(GaussBinom, PascalRecurrence) {
  QValue q = Q(-2, 3);
  for (std::size_t n = 1; n <= 14; ++n)
    for (std::size_t k = 1; k < n; ++k)
      expect_close(gauss_binom(n, k, q),
                   gauss_binom(n - 1, k - 1, q) + qpow(q.value(), static_cast<long>(k)) * gauss_binom(n - 1, k, q), 1e-70);
}

TEST(GaussBinom, NearOneStaysAccurate) {
  // q close to 1: the ratio product must approach the ordinary binomial.
  QValue q(Scalar(1, P) - Scalar::exp2(-60, P));
  EXPECT_NEAR(gauss_binom(10, 4, q).to_double(), 210.0, 1e-9);
  auto row = gauss_binom_row(10, q);
  EXPECT_EQ(row.size(), 11u);
}

TEST(Rational, ParsesAndReduces) {
  auto r = Rational::parse("6/-8");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->to_string(), "-3/4");
  EXPECT_EQ(Rational::parse("0.125")->to_string(), "1/8");
  EXPECT_EQ(Rational::parse("-2")->to_string(), "-2/1");
  EXPECT_FALSE(Rational::parse("1/0"));
  EXPECT_FALSE(Rational::parse("abc"));
  EXPECT_EQ(Rational::parse("3/8")->to_scalar(P), R(3, 8));
}
