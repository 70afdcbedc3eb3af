#include "permfix/numeric.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace permfix {

Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Integer r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Integer pow2(unsigned n) {
  Integer r = 1;
  r <<= n;
  return r;
}

Rational inv_factorial(unsigned n) { return Rational(Integer(1), factorial(n)); }

std::string to_string(const Integer& v) { return v.str(); }
std::string to_string(const Rational& v) { return v.str(); }

Interval::Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (hi < lo) throw std::invalid_argument("Interval: hi < lo");
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
  return {*mn, *mx};
}

Interval operator*(const Interval& a, const Rational& s) {
  if (s >= 0) return {a.lo * s, a.hi * s};
  return {a.hi * s, a.lo * s};
}
Interval operator*(const Rational& s, const Interval& a) { return a * s; }
Interval operator+(const Interval& a, const Rational& s) { return {a.lo + s, a.hi + s}; }
Interval operator-(const Rational& s, const Interval& a) { return {s - a.hi, s - a.lo}; }

Interval abs(const Interval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return {-a.hi, -a.lo};
  return {Rational(0), std::max(Rational(-a.lo), a.hi)};
}

Interval positive_part(const Interval& a) {
  return {a.lo > 0 ? a.lo : Rational(0), a.hi > 0 ? a.hi : Rational(0)};
}

Interval reciprocal(const Interval& a) {
  if (a.lo <= 0 && a.hi >= 0) throw std::domain_error("reciprocal: interval contains zero");
  return {Rational(1) / a.hi, Rational(1) / a.lo};
}

Interval einv_enclosure(unsigned digits) {
  // Partial sums S_n alternate around e^{-1} with |S_n - S_{n+1}| = 1/(n+1)!.
  Integer scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  unsigned n = 1;
  Integer fact = 2;  // (n+1)!
  while (fact <= scale) {
    ++n;
    fact *= n + 1;
  }
  Rational s = 0;
  for (unsigned k = 0; k <= n; ++k) {
    Rational term = inv_factorial(k);
    s += (k % 2 == 0) ? term : Rational(-term);
  }
  Rational next = s + ((n + 1) % 2 == 0 ? inv_factorial(n + 1) : Rational(-inv_factorial(n + 1)));
  return s < next ? Interval(s, next) : Interval(next, s);
}

Interval e_enclosure(unsigned digits) { return reciprocal(einv_enclosure(digits + 1)); }

PrecisionScope::PrecisionScope(unsigned digits10) : saved_(Real::default_precision()) {
  Real::default_precision(digits10);
}
PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

Real to_real(const Rational& v) {
  Real num(boost::multiprecision::numerator(v));
  Real den(boost::multiprecision::denominator(v));
  return num / den;
}

std::string to_decimal(const Real& v, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string to_decimal(const Rational& v, int digits) {
  PrecisionScope scope(static_cast<unsigned>(std::max(digits + 10, 30)));
  return to_decimal(to_real(v), digits);
}

std::uint64_t dyadic53_ceil(const Rational& v) {
  if (v < 0 || v > 1) throw std::domain_error("dyadic53_ceil: value outside [0,1]");
  Integer num = boost::multiprecision::numerator(v) << 53;
  const Integer& den = boost::multiprecision::denominator(v);
  Integer q = num / den;
  if (q * den != num) q += 1;
  return q.convert_to<std::uint64_t>();
}

}  // namespace permfix
