#include "permfix/numeric.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace permfix;

TEST(Numeric, FactorialAndBinomial) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(10), 3628800);
  EXPECT_EQ(binomial(10, 3), 120);
  EXPECT_EQ(binomial(5, 7), 0);
  EXPECT_EQ(binomial(5, -1), 0);
  EXPECT_EQ(pow2(10), 1024);
  EXPECT_EQ(inv_factorial(4), Rational(1, 24));
}

TEST(Numeric, EinvEnclosureIsTightAndCorrect) {
  for (unsigned d : {5u, 20u, 60u}) {
    const Interval e = einv_enclosure(d);
    EXPECT_LT(e.lo, e.hi);
    EXPECT_LT(e.width(), Rational(Integer(1), boost::multiprecision::pow(Integer(10), d)));
    // Compare with the double value of exp(-1).
    EXPECT_LE(e.lo.convert_to<double>(), std::exp(-1.0) + 1e-15);
    EXPECT_GE(e.hi.convert_to<double>(), std::exp(-1.0) - 1e-15);
  }
}

TEST(Numeric, EEnclosureContainsE) {
  const Interval e = e_enclosure(30);
  EXPECT_LE(e.lo.convert_to<double>(), std::exp(1.0) + 1e-14);
  EXPECT_GE(e.hi.convert_to<double>(), std::exp(1.0) - 1e-14);
  const Interval prod = e * einv_enclosure(30);
  EXPECT_TRUE(prod.contains(Rational(1)));
}

TEST(Numeric, IntervalArithmetic) {
  const Interval a(Rational(1), Rational(2));
  const Interval b(Rational(-1), Rational(3));
  const Interval p = a * b;
  EXPECT_EQ(p.lo, -2);
  EXPECT_EQ(p.hi, 6);
  EXPECT_EQ((a - b).lo, -2);
  EXPECT_EQ(abs(b).lo, 0);
  EXPECT_EQ(abs(b).hi, 3);
  EXPECT_THROW(reciprocal(b), std::domain_error);
  EXPECT_EQ(reciprocal(a).lo, Rational(1, 2));
  EXPECT_EQ(positive_part(Interval(Rational(-3), Rational(-1))).hi, 0);
}

TEST(Numeric, Dyadic53Ceil) {
  const std::uint64_t two53 = std::uint64_t(1) << 53;
  EXPECT_EQ(dyadic53_ceil(Rational(0)), 0u);
  EXPECT_EQ(dyadic53_ceil(Rational(1)), two53);
  EXPECT_EQ(dyadic53_ceil(Rational(1, 2)), two53 / 2);
  const std::uint64_t t = dyadic53_ceil(Rational(1, 3));
  // t is the least integer with t/2^53 >= 1/3.
  EXPECT_GE(Rational(Integer(t), Integer(two53)), Rational(1, 3));
  EXPECT_LT(Rational(Integer(t - 1), Integer(two53)), Rational(1, 3));
  EXPECT_THROW(dyadic53_ceil(Rational(3, 2)), std::domain_error);
}

TEST(Numeric, DecimalRendering) {
  PrecisionScope ps(40);
  EXPECT_EQ(to_decimal(Rational(1, 4), 3), "0.25");
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
}
