#pragma once

// Exact integer/rational arithmetic, rational interval enclosures and the
// high-precision real type shared by every module.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>

namespace permfix {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

Integer factorial(unsigned n);
Integer binomial(long n, long k);
Integer pow2(unsigned n);
Rational inv_factorial(unsigned n);

inline Rational make_rational(const Integer& num, const Integer& den) { return Rational(num, den); }

std::string to_string(const Integer& v);
std::string to_string(const Rational& v);

/// Closed interval [lo, hi] with exact rational endpoints. Arithmetic is
/// exact, so an enclosure never loses rigor; only its width grows.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  explicit Interval(const Rational& point) : lo(point), hi(point) {}
  Interval(Rational lo_, Rational hi_);

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool certainly_le(const Rational& bound) const { return hi <= bound; }
  bool certainly_ge(const Rational& bound) const { return lo >= bound; }
  bool certainly_positive() const { return lo > 0; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Rational& s);
Interval operator*(const Rational& s, const Interval& a);
Interval operator+(const Interval& a, const Rational& s);
Interval operator-(const Rational& s, const Interval& a);
Interval abs(const Interval& a);
Interval positive_part(const Interval& a);
/// Throws std::domain_error when the interval straddles zero.
Interval reciprocal(const Interval& a);

/// Enclosure of e^{-1} of width below 10^{-digits}, from two consecutive
/// partial sums of sum_k (-1)^k / k!.
Interval einv_enclosure(unsigned digits);
/// Enclosure of e, the reciprocal of einv_enclosure.
Interval e_enclosure(unsigned digits);

/// Sets the default MPFR working precision (decimal digits) for the
/// lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits10);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

Real to_real(const Rational& v);
std::string to_decimal(const Real& v, int digits = 12);
std::string to_decimal(const Rational& v, int digits = 12);

/// Smallest integer k with k >= v * 2^53, i.e. the integer threshold such
/// that for a 53-bit integer u, (u / 2^53 < v) <=> (u < k).
std::uint64_t dyadic53_ceil(const Rational& v);

}  // namespace permfix
