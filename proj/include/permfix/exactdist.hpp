#pragma once

// Exact laws on the non-negative integers: derangement numbers, the
// fixed-point law of a uniform permutation, the Poisson(1) law carried as
// rational coefficients times e^{-1}, and distances between them.

#include "permfix/numeric.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace permfix {

enum class TvConvention {
  half,   ///< sum_x (d1 - d2)_+
  total,  ///< sum_x |d1 - d2|, twice the half convention
};

const char* to_string(TvConvention c);

/// Finitely supported distribution on {0, 1, 2, ...} with exact weights.
/// Support is strictly increasing and weights sum to exactly one.
class ExactDist {
 public:
  ExactDist(std::string label, std::vector<long> support, std::vector<Rational> weights);

  const std::string& label() const { return label_; }
  const std::vector<long>& support() const { return support_; }
  const std::vector<Rational>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }
  long max_point() const { return support_.back(); }

  /// Weight of x; zero outside the support.
  Rational operator()(long x) const;
  /// Mass of {lo, ..., hi}.
  Rational mass(long lo, long hi) const;
  /// Conditioning on {0, ..., max_x}; throws if that set has zero mass.
  ExactDist conditioned(long max_x, std::string label) const;

  nlohmann::json to_json(unsigned precision_digits = 0) const;
  static ExactDist from_json(const nlohmann::json& j);

  friend bool operator==(const ExactDist& a, const ExactDist& b) {
    return a.support_ == b.support_ && a.weights_ == b.weights_;
  }

 private:
  std::string label_;
  std::vector<long> support_;
  std::vector<Rational> weights_;
};

struct DerangementTable {
  std::vector<Integer> values;  ///< D_0 .. D_max

  const Integer& operator[](std::size_t n) const { return values.at(n); }
  std::size_t max_n() const { return values.size() - 1; }
};

/// D_0..D_{n_max} by D_n = (n-1)(D_{n-1} + D_{n-2}); each value is
/// re-checked against n! sum_k (-1)^k/k! and a mismatch throws.
DerangementTable derangements(unsigned n_max);

/// Law of the number of fixed points of a uniform permutation of N points:
/// pi(x) = D_{N-x} / ((N-x)! x!), with the impossible point N-1 omitted.
ExactDist fixed_point_pmf(unsigned N);

/// Poisson(1) law as coefficients 1/k! of the shared unit e^{-1}.
struct PoissonLaw {
  std::vector<Rational> coefficients;  ///< 1/k!, k = 0..k_max

  long k_max() const { return static_cast<long>(coefficients.size()) - 1; }
  Rational coefficient(long k) const;
  /// 1 - e^{-1} sum_{k<=k_max} 1/k!, the mass beyond k_max.
  Interval tail_mass(const Interval& einv) const;
  Interval weight(long k, const Interval& einv) const { return einv * coefficient(k); }
};

PoissonLaw poisson_pmf(unsigned k_max);

/// Poisson(1) conditioned on {0..max_x}: weights proportional to 1/x!.
ExactDist poisson_conditioned(unsigned max_x);

/// Exact distance between two rational laws.
Rational tv_distance(const ExactDist& d1, const ExactDist& d2, TvConvention convention);

/// Rigorous enclosure of the distance between a rational law and Poisson(1),
/// using an e^{-1} enclosure of width below 10^{-digits}.
Interval tv_distance_poisson(const ExactDist& d, TvConvention convention, unsigned digits = 50);

struct DistanceBracket {
  Rational lower;  ///< N/(N+2) * 2^{N+1}/(N+1)!
  Rational upper;  ///< (2^{N+1} - 1)/(N+1)!
};

DistanceBracket distance_bracket(unsigned N);

/// 2^N/(N+1)!, the half-convention bound on the Poisson distance.
Rational abstract_bound(unsigned N);

/// sum over odd n <= N of 1/((n+1)!(N-n)!): the middle term of the
/// alternating-series upper bound on the half-convention distance.
Rational odd_sum_bound(unsigned N);

struct LogRate {
  Real value;            ///< ln(TV) / (N ln N)
  Interval tv;           ///< enclosure of the distance used
  unsigned digits = 0;   ///< working precision
};

/// ln(TV(pi_N, Poisson)) / (N ln N). Uses at least N log10 N + 20 digits;
/// throws std::runtime_error ("precision insufficient") when the distance
/// enclosure is not bounded away from zero at the working precision.
LogRate log_rate(unsigned N, TvConvention convention, unsigned digits = 0);

/// Minimum digits required by log_rate for N.
unsigned log_rate_min_digits(unsigned N);

/// sup_x (1 - d1(x)/d2(x)). Points where both laws vanish are skipped; a
/// point with d2(x) = 0 < d1(x) contributes the value 1.
Rational separation_discrepancy(const ExactDist& d1, const ExactDist& d2);

/// Separation discrepancy of d1 from Poisson(1), as an enclosure.
Interval separation_discrepancy_poisson(const ExactDist& d1, unsigned digits = 50);

/// 1 - pi_N(x) / Poisson(x) as an enclosure.
Interval poisson_ratio_gap(unsigned N, long x, unsigned digits = 50);

}  // namespace permfix
