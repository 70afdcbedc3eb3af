#include "permfix/altcouplings.hpp"
#include "permfix/exactdist.hpp"
#include "permfix/numeric.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace permfix;

TEST(Mallows, ExactLawIsFixedPointLaw) {
  for (unsigned N = 1; N <= 12; ++N) EXPECT_EQ(mallows_exact_pmf(N), fixed_point_pmf(N)) << N;
  const auto one = mallows_exact_pmf(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.support()[0], 1);
}

TEST(Mallows, StatisticFromBits) {
  // X = 1,1,0,1,1 with N = 5: pairs (1,2),(4,5) plus X_5.
  EXPECT_EQ(mallows_s_n({1, 2, 4, 5}, 5), 3);
  EXPECT_EQ(mallows_s_n({1, 3}, 5), 0);
  EXPECT_EQ(mallows_s_n({1, 5}, 5), 1);
  EXPECT_EQ(mallows_s_n({1, 5, 6}, 5), 1);  // bits past N ignored
  EXPECT_EQ(mallows_s_trunc({1, 2, 4, 5, 9, 10}, 9), 2);
  EXPECT_EQ(mallows_s_trunc({1, 2, 4, 5, 9, 10}, 10), 3);
}

TEST(Mallows, SamplerConsistency) {
  for (std::uint64_t r = 0; r < 200; ++r) {
    const auto s = mallows_sample(10, 100000, 99, r);
    ASSERT_FALSE(s.ones.empty());
    EXPECT_EQ(s.ones.front(), 1);
    for (std::size_t i = 1; i < s.ones.size(); ++i) EXPECT_LT(s.ones[i - 1], s.ones[i]);
    EXPECT_LE(s.ones.back(), s.K);
    EXPECT_EQ(s.s_n, mallows_s_n(s.ones, 10));
    EXPECT_EQ(s.s_trunc, mallows_s_trunc(s.ones, s.K));
    EXPECT_EQ(s.tail_bound, Rational(1, 100000));
  }
  const auto a = mallows_sample(10, 1000, 5, 3), b = mallows_sample(10, 1000, 5, 3);
  EXPECT_EQ(a.ones, b.ones);
}

TEST(Mallows, MarginalFrequencies) {
  // P[X_n = 1] = 1/n, checked at n = 2, 3, 4.
  const int R = 40000;
  int c2 = 0, c3 = 0, c4 = 0;
  for (int r = 0; r < R; ++r) {
    const auto s = mallows_sample(4, 10, 1, r);
    for (auto k : s.ones) {
      c2 += k == 2;
      c3 += k == 3;
      c4 += k == 4;
    }
  }
  auto near = [&](int c, double p) { return std::fabs(c / double(R) - p) < 4 * std::sqrt(p * (1 - p) / R); };
  EXPECT_TRUE(near(c2, 0.5));
  EXPECT_TRUE(near(c3, 1.0 / 3));
  EXPECT_TRUE(near(c4, 0.25));
}

TEST(Mallows, Discrepancy) {
  const auto d = mallows_discrepancy(10, 20000, 1000000, 4);
  EXPECT_EQ(d.replicas, 20000u);
  EXPECT_GT(d.estimate, 0);
  EXPECT_LT(d.estimate, 1);
  EXPECT_THROW(mallows_discrepancy(10, 10, 10, 1), std::invalid_argument);
}

TEST(AscentPeak, Statistics) {
  EXPECT_EQ(ascent_peak_m(1, 2), 0);
  EXPECT_EQ(ascent_peak_m(1, 3), 1);
  EXPECT_EQ(ascent_peak_m(3, 4), 2);
  const auto a = ascent_peak_from({0.9, 0.5, 0.7, 0.2});
  EXPECT_EQ(a.s, 2);
  EXPECT_EQ(a.t, 3);
  EXPECT_EQ(a.m, 1);
  EXPECT_FALSE(a.tie);
  EXPECT_EQ(ascent_peak_from({0.1, 0.2, 0.3}).t, 0);
  EXPECT_TRUE(ascent_peak_from({0.3, 0.3, 0.1}).tie);
  // Truncation changes M only if T > N.
  for (long s = 1; s < 12; ++s)
    for (long t = std::max(2L, s); t < 14; ++t)
      for (unsigned N = 2; N < 12; ++N)
        if (t <= static_cast<long>(N)) EXPECT_EQ(ascent_peak_m(s, t), ascent_peak_m_n(s, t, N));
}

TEST(AscentPeak, SamplerMatchesScan) {
  for (std::uint64_t r = 0; r < 500; ++r) {
    const auto a = ascent_peak_sample(17, r);
    if (a.tie) continue;
    const auto b = ascent_peak_from(a.u);
    EXPECT_EQ(a.s, b.s);
    EXPECT_EQ(a.t, b.t);
    EXPECT_EQ(a.m, b.m);
    EXPECT_EQ(static_cast<long>(a.u.size()), a.t + 1);  // stops at the peak
  }
}

TEST(AscentPeak, PeakTailExact) {
  EXPECT_EQ(peak_tail_exact(2), Rational(2, 3));
  EXPECT_LE(peak_tail_exact(3), Rational(1, 3));
  // Orderings with no interior peak decrease then increase: 2^N of them.
  for (unsigned N = 1; N <= 9; ++N) {
    EXPECT_EQ(peak_tail_exact(N), Rational(pow2(N), factorial(N + 1))) << N;
    EXPECT_LE(peak_tail_exact(N), peak_tail_bound(N));
  }
}

TEST(AscentPeak, BatchAndDistances) {
  const auto b = ascent_peak_batch({4, 6}, 20000, 8);
  std::uint64_t total = 0;
  for (const auto& [m, c] : b.m_counts) total += c;
  EXPECT_EQ(total + b.ties, b.samples);
  EXPECT_LT(empirical_tv_poisson(b.m_counts, total), 0.03);
  EXPECT_LT(empirical_tv(b.m_n_counts.at(6), total, fixed_point_pmf(6)), 0.03);
  const double exact6 = peak_tail_exact(6).convert_to<double>();
  EXPECT_LE(b.disagreement_rate(6), exact6 + 4 * b.disagreement_sigma(6) + 1e-4);
  EXPECT_DOUBLE_EQ(empirical_tv({{1, 1}}, 1, fixed_point_pmf(1)), 0.0);
}
