#include "permfix/exactdist.hpp"

#include "permfix/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace permfix {

const char* to_string(TvConvention c) { return c == TvConvention::half ? "half" : "total"; }

ExactDist::ExactDist(std::string label, std::vector<long> support, std::vector<Rational> weights)
    : label_(std::move(label)), support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) throw std::invalid_argument("ExactDist: empty support");
  if (support_.size() != weights_.size()) throw std::invalid_argument("ExactDist: support/weights size mismatch");
  Rational total = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] < 0) throw std::invalid_argument("ExactDist: negative support point");
    if (i > 0 && support_[i] <= support_[i - 1])
      throw std::invalid_argument("ExactDist: support not strictly increasing");
    if (weights_[i] < 0) throw std::invalid_argument("ExactDist: negative weight");
    total += weights_[i];
  }
  if (total != 1) throw std::invalid_argument("ExactDist: weights sum to " + total.str() + ", not 1");
}

Rational ExactDist::operator()(long x) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), x);
  if (it == support_.end() || *it != x) return 0;
  return weights_[static_cast<std::size_t>(it - support_.begin())];
}

Rational ExactDist::mass(long lo, long hi) const {
  Rational m = 0;
  for (std::size_t i = 0; i < support_.size(); ++i)
    if (support_[i] >= lo && support_[i] <= hi) m += weights_[i];
  return m;
}

ExactDist ExactDist::conditioned(long max_x, std::string label) const {
  Rational z = mass(0, max_x);
  if (z == 0) throw std::domain_error("ExactDist::conditioned: zero mass");
  std::vector<long> s;
  std::vector<Rational> w;
  for (std::size_t i = 0; i < support_.size() && support_[i] <= max_x; ++i) {
    s.push_back(support_[i]);
    w.push_back(weights_[i] / z);
  }
  return ExactDist(std::move(label), std::move(s), std::move(w));
}

nlohmann::json ExactDist::to_json(unsigned precision_digits) const {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < support_.size(); ++i) {
    entries.push_back({{"x", support_[i]},
                       {"num", integer_to_json(boost::multiprecision::numerator(weights_[i]))},
                       {"den", integer_to_json(boost::multiprecision::denominator(weights_[i]))}});
  }
  return {{"label", label_}, {"entries", entries}, {"precision_digits", precision_digits}};
}

ExactDist ExactDist::from_json(const nlohmann::json& j) {
  std::vector<long> s;
  std::vector<Rational> w;
  for (const auto& e : j.at("entries")) {
    s.push_back(e.at("x").get<long>());
    w.emplace_back(integer_from_json(e.at("num")), integer_from_json(e.at("den")));
  }
  return ExactDist(j.at("label").get<std::string>(), std::move(s), std::move(w));
}

DerangementTable derangements(unsigned n_max) {
  DerangementTable t;
  t.values.reserve(n_max + 1);
  t.values.emplace_back(1);
  if (n_max >= 1) t.values.emplace_back(0);
  for (unsigned n = 2; n <= n_max; ++n)
    t.values.push_back(Integer(n - 1) * (t.values[n - 1] + t.values[n - 2]));

  // n! sum_{k<=n} (-1)^k / k! = sum_k (-1)^k n!/k!, all integer terms.
  for (unsigned n = 0; n <= n_max; ++n) {
    Integer alt = 0;
    Integer falling = 1;  // n!/k! for k running down from n
    for (unsigned k = n + 1; k-- > 0;) {
      alt += (k % 2 == 0) ? falling : Integer(-falling);
      falling *= k;
    }
    if (alt != t.values[n])
      throw std::logic_error("derangements: recurrence disagrees with alternating sum at n=" + std::to_string(n));
  }
  return t;
}

ExactDist fixed_point_pmf(unsigned N) {
  if (N < 1) throw std::invalid_argument("fixed_point_pmf: N must be >= 1");
  const DerangementTable d = derangements(N);
  std::vector<long> s;
  std::vector<Rational> w;
  for (unsigned x = 0; x <= N; ++x) {
    if (x + 1 == N) continue;
    s.push_back(x);
    w.emplace_back(d[N - x], factorial(N - x) * factorial(x));
  }
  return ExactDist("pi_" + std::to_string(N), std::move(s), std::move(w));
}

Rational PoissonLaw::coefficient(long k) const {
  if (k < 0) return 0;
  if (k <= k_max()) return coefficients[static_cast<std::size_t>(k)];
  return inv_factorial(static_cast<unsigned>(k));
}

Interval PoissonLaw::tail_mass(const Interval& einv) const {
  Rational partial = 0;
  for (const auto& c : coefficients) partial += c;
  return Rational(1) - einv * partial;
}

PoissonLaw poisson_pmf(unsigned k_max) {
  PoissonLaw p;
  p.coefficients.reserve(k_max + 1);
  Integer f = 1;
  for (unsigned k = 0; k <= k_max; ++k) {
    if (k > 0) f *= k;
    p.coefficients.emplace_back(Integer(1), f);
  }
  return p;
}

ExactDist poisson_conditioned(unsigned max_x) {
  PoissonLaw p = poisson_pmf(max_x);
  Rational z = 0;
  for (const auto& c : p.coefficients) z += c;
  std::vector<long> s;
  std::vector<Rational> w;
  for (unsigned x = 0; x <= max_x; ++x) {
    s.push_back(x);
    w.push_back(p.coefficients[x] / z);
  }
  return ExactDist("zeta_" + std::to_string(max_x), std::move(s), std::move(w));
}

Rational tv_distance(const ExactDist& d1, const ExactDist& d2, TvConvention convention) {
  Rational half = 0;
  Rational total = 0;
  const long hi = std::max(d1.max_point(), d2.max_point());
  for (long x = 0; x <= hi; ++x) {
    Rational diff = d1(x) - d2(x);
    if (diff > 0) half += diff;
    total += diff < 0 ? Rational(-diff) : diff;
  }
  return convention == TvConvention::half ? half : total;
}

Interval tv_distance_poisson(const ExactDist& d, TvConvention convention, unsigned digits) {
  const Interval einv = einv_enclosure(digits);
  const PoissonLaw p = poisson_pmf(static_cast<unsigned>(d.max_point()));
  Interval acc(Rational(0));
  for (long x = 0; x <= d.max_point(); ++x) {
    Interval diff = Interval(d(x)) - p.weight(x, einv);
    acc = acc + (convention == TvConvention::half ? positive_part(diff) : abs(diff));
  }
  // Beyond the support d vanishes, so only the total convention sees the tail.
  if (convention == TvConvention::total) acc = acc + p.tail_mass(einv);
  return acc;
}

DistanceBracket distance_bracket(unsigned N) {
  const Integer two = pow2(N + 1);
  const Integer f = factorial(N + 1);
  return {Rational(Integer(N), Integer(N + 2)) * Rational(two, f), Rational(two - 1, f)};
}

Rational abstract_bound(unsigned N) { return Rational(pow2(N), factorial(N + 1)); }

Rational odd_sum_bound(unsigned N) {
  Rational s = 0;
  for (unsigned n = 1; n <= N; n += 2) s += Rational(Integer(1), factorial(n + 1) * factorial(N - n));
  return s;
}

unsigned log_rate_min_digits(unsigned N) {
  const double d = N * std::log10(static_cast<double>(std::max(N, 2u)));
  return static_cast<unsigned>(std::ceil(d)) + 20;
}

LogRate log_rate(unsigned N, TvConvention convention, unsigned digits) {
  if (N < 4) throw std::invalid_argument("log_rate: N must be >= 4");
  digits = std::max(digits, log_rate_min_digits(N));
  LogRate r;
  r.digits = digits;
  r.tv = tv_distance_poisson(fixed_point_pmf(N), convention, digits);
  if (!r.tv.certainly_positive())
    throw std::runtime_error("log_rate: precision insufficient, distance not resolved at " +
                             std::to_string(digits) + " digits");
  PrecisionScope scope(digits);
  const Real n(N);
  r.value = boost::multiprecision::log(to_real(r.tv.midpoint())) / (n * boost::multiprecision::log(n));
  return r;
}

Rational separation_discrepancy(const ExactDist& d1, const ExactDist& d2) {
  bool any = false;
  Rational best = 0;
  const long hi = std::max(d1.max_point(), d2.max_point());
  for (long x = 0; x <= hi; ++x) {
    const Rational a = d1(x);
    const Rational b = d2(x);
    if (a == 0 && b == 0) continue;
    Rational v = b == 0 ? Rational(1) : Rational(1 - a / b);
    if (!any || v > best) best = v;
    any = true;
  }
  return best;
}

Interval separation_discrepancy_poisson(const ExactDist& d1, unsigned digits) {
  // Poisson(1) charges every integer, and d1 vanishes past its support, where
  // the ratio term equals 1; the supremum is therefore 1 unless some point
  // exceeds it, which cannot happen for non-negative d1.
  const Interval e = e_enclosure(digits);
  Interval best(Rational(1));
  for (long x = 0; x <= d1.max_point(); ++x) {
    Interval v = Rational(1) - e * (d1(x) * Rational(factorial(static_cast<unsigned>(x))));
    if (v.lo > best.lo) best = v;
  }
  return best;
}

Interval poisson_ratio_gap(unsigned N, long x, unsigned digits) {
  const ExactDist pi = fixed_point_pmf(N);
  const Interval e = e_enclosure(digits);
  return Rational(1) - e * (pi(x) * Rational(factorial(static_cast<unsigned>(x))));
}

}  // namespace permfix
