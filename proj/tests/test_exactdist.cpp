#include "permfix/exactdist.hpp"
#include "permfix/perm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace permfix;

namespace {

// Fixed-point law by enumerating S_N, independent of the derangement route.
std::map<long, Rational> enumerated_pmf(int N) {
  std::map<long, Integer> counts;
  for_each_permutation(N, [&](const Permutation& s) {
    long f = 0;
    for (int i = 0; i < N; ++i) f += s[static_cast<std::size_t>(i)] == i;
    ++counts[f];
  });
  std::map<long, Rational> out;
  for (auto& [x, c] : counts) out[x] = Rational(c, factorial(static_cast<unsigned>(N)));
  return out;
}

long double poisson_ld(long x) { return std::exp(-1.0L - std::lgamma(static_cast<long double>(x) + 1.0L)); }

}  // namespace

TEST(ExactDist, ConstructionValidates) {
  EXPECT_THROW(ExactDist("a", {}, {}), std::invalid_argument);
  EXPECT_THROW(ExactDist("a", {1, 0}, {Rational(1, 2), Rational(1, 2)}), std::invalid_argument);
  EXPECT_THROW(ExactDist("a", {0, 1}, {Rational(1, 2), Rational(1, 3)}), std::invalid_argument);
  EXPECT_THROW(ExactDist("a", {0, 1}, {Rational(3, 2), Rational(-1, 2)}), std::invalid_argument);
  const ExactDist d("a", {0, 2}, {Rational(1, 4), Rational(3, 4)});
  EXPECT_EQ(d(1), 0);
  EXPECT_EQ(d(2), Rational(3, 4));
  EXPECT_EQ(d.mass(1, 5), Rational(3, 4));
}

TEST(ExactDist, JsonRoundTrip) {
  const ExactDist pi = fixed_point_pmf(9);
  const auto j = pi.to_json(20);
  EXPECT_EQ(ExactDist::from_json(j), pi);
  EXPECT_EQ(j.at("label"), "pi_9");
}

TEST(ExactDist, Derangements) {
  const auto d = derangements(12);
  EXPECT_EQ(d[0], 1);
  EXPECT_EQ(d[1], 0);
  EXPECT_EQ(d[4], 9);
  EXPECT_EQ(d[5], 44);
  EXPECT_EQ(d[10], 1334961);
}

TEST(ExactDist, FixedPointPmfMatchesEnumeration) {
  for (int N = 1; N <= 8; ++N) {
    const ExactDist pi = fixed_point_pmf(static_cast<unsigned>(N));
    const auto oracle = enumerated_pmf(N);
    ASSERT_EQ(pi.size(), oracle.size()) << N;
    for (auto& [x, w] : oracle) EXPECT_EQ(pi(x), w) << "N=" << N << " x=" << x;
    EXPECT_EQ(pi(N - 1), 0);
  }
  EXPECT_EQ(fixed_point_pmf(4)(0), Rational(3, 8));
  EXPECT_EQ(fixed_point_pmf(4).size(), 4u);
}

TEST(ExactDist, PoissonTailMass) {
  const PoissonLaw p = poisson_pmf(10);
  const Interval tail = p.tail_mass(einv_enclosure(40));
  long double oracle = 1.0L;
  for (long k = 0; k <= 10; ++k) oracle -= poisson_ld(k);
  EXPECT_NEAR(tail.midpoint().convert_to<double>(), static_cast<double>(oracle), 1e-15);
  EXPECT_GT(tail.lo, 0);
}

TEST(ExactDist, TvConventions) {
  const ExactDist a("a", {0, 1}, {Rational(1, 4), Rational(3, 4)});
  const ExactDist b("b", {1, 2}, {Rational(1, 2), Rational(1, 2)});
  EXPECT_EQ(tv_distance(a, b, TvConvention::half), Rational(1, 2));
  EXPECT_EQ(tv_distance(a, b, TvConvention::total), Rational(1));
  EXPECT_EQ(tv_distance(a, a, TvConvention::half), 0);
}

TEST(ExactDist, TvToPoissonAgainstLongDouble) {
  for (unsigned N : {4u, 6u, 9u}) {
    const ExactDist pi = fixed_point_pmf(N);
    long double half = 0, total = 0, covered = 0;
    for (long x = 0; x <= static_cast<long>(N); ++x) {
      const long double q = poisson_ld(x);
      const long double p = pi(x).convert_to<long double>();
      half += std::max(0.0L, p - q);
      total += std::fabs(p - q);
      covered += q;
    }
    total += 1.0L - covered;
    const Interval h = tv_distance_poisson(pi, TvConvention::half);
    const Interval t = tv_distance_poisson(pi, TvConvention::total);
    EXPECT_NEAR(h.midpoint().convert_to<double>(), static_cast<double>(half), 1e-15) << N;
    EXPECT_NEAR(t.midpoint().convert_to<double>(), static_cast<double>(total), 1e-15) << N;
    EXPECT_LT(t.width(), Rational(Integer(1), boost::multiprecision::pow(Integer(10), 40)));
  }
  EXPECT_NEAR(tv_distance_poisson(fixed_point_pmf(4), TvConvention::half).midpoint().convert_to<double>(), 0.09952,
              5e-5);
  EXPECT_NEAR(tv_distance_poisson(fixed_point_pmf(4), TvConvention::total).midpoint().convert_to<double>(), 0.19904,
              5e-5);
}

TEST(ExactDist, TotalIsTwiceHalf) {
  for (unsigned N = 4; N <= 12; ++N) {
    const Interval h = tv_distance_poisson(fixed_point_pmf(N), TvConvention::half, 60);
    const Interval t = tv_distance_poisson(fixed_point_pmf(N), TvConvention::total, 60);
    const Interval diff = t - Rational(2) * h;
    EXPECT_LE(abs(diff).hi, Rational(Integer(1), boost::multiprecision::pow(Integer(10), 50)));
  }
}

TEST(ExactDist, DistanceBracket) {
  const auto b = distance_bracket(4);
  EXPECT_EQ(b.lower, Rational(16, 90));
  EXPECT_EQ(b.upper, Rational(31, 120));
  for (unsigned N = 4; N <= 15; ++N) {
    const auto bb = distance_bracket(N);
    const Interval t = tv_distance_poisson(fixed_point_pmf(N), TvConvention::total, 50);
    EXPECT_TRUE(t.certainly_ge(bb.lower)) << N;
    EXPECT_TRUE(t.certainly_le(bb.upper)) << N;
    // The half-convention distance stays below 2^N/(N+1)!.
    EXPECT_TRUE(tv_distance_poisson(fixed_point_pmf(N), TvConvention::half).certainly_le(abstract_bound(N))) << N;
  }
}

TEST(ExactDist, LogRate) {
  const LogRate r = log_rate(10, TvConvention::total);
  const long double tv = tv_distance_poisson(fixed_point_pmf(10), TvConvention::total).midpoint().convert_to<long double>();
  EXPECT_NEAR(r.value.convert_to<double>(), static_cast<double>(std::log(tv) / (10.0L * std::log(10.0L))), 1e-12);
  EXPECT_GE(r.digits, log_rate_min_digits(10));
  EXPECT_THROW(log_rate(3, TvConvention::total), std::invalid_argument);
  // Large N needs many digits; the minimum is enforced internally.
  EXPECT_LT(log_rate(30, TvConvention::total, 10).value, 0);
}

TEST(ExactDist, SeparationDiscrepancy) {
  const ExactDist a("a", {0, 1}, {Rational(1, 4), Rational(3, 4)});
  const ExactDist b("b", {0, 1}, {Rational(1, 2), Rational(1, 2)});
  EXPECT_EQ(separation_discrepancy(a, b), Rational(1, 2));
  const ExactDist c("c", {0, 2}, {Rational(1, 2), Rational(1, 2)});
  EXPECT_EQ(separation_discrepancy(c, b), 1);  // d2(2) = 0 < d1(2) contributes 1
  // Poisson charges points beyond N where pi_N vanishes.
  EXPECT_TRUE(separation_discrepancy_poisson(fixed_point_pmf(8)).contains(Rational(1)));
  // 1 - e pi_N(N-4) (N-4)! = 1 - 9e/24 < 0 for every N >= 4.
  const Interval gap = poisson_ratio_gap(10, 6);
  const Interval expect = Rational(1) - e_enclosure(50) * Rational(9, 24);
  EXPECT_EQ(gap.lo, expect.lo);
  EXPECT_LT(gap.hi, 0);
}
