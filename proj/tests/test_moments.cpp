#include "permfix/kernels.hpp"
#include "permfix/moments.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace permfix;

namespace {

// Stirling numbers of the second kind summed: an independent Bell oracle.
Integer bell_by_stirling(unsigned n) {
  std::vector<std::vector<Integer>> s(n + 1, std::vector<Integer>(n + 1, 0));
  s[0][0] = 1;
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned k = 1; k <= i; ++k) s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
  Integer b = 0;
  for (unsigned k = 0; k <= n; ++k) b += s[n][k];
  return b;
}

}  // namespace

TEST(Moments, FallingMomentsAreOne) {
  for (unsigned N = 1; N <= 12; ++N)
    for (unsigned k = 0; k <= N; ++k) EXPECT_EQ(falling_moment(N, k), 1) << N << " " << k;
  EXPECT_EQ(falling(5, 0), 1);
  EXPECT_EQ(falling(5, 3), 60);
  EXPECT_EQ(falling(2, 3), 0);
}

TEST(Moments, BellNumbers) {
  const auto b = bell_numbers(15);
  EXPECT_EQ(b[0], 1);
  EXPECT_EQ(b[4], 15);
  for (unsigned n = 0; n <= 15; ++n) EXPECT_EQ(b[n], bell_by_stirling(n)) << n;
}

TEST(Moments, RawMoments) {
  const auto r2 = raw_moment_equality(4, 2);
  EXPECT_EQ(r2.moment, 2);
  EXPECT_TRUE(r2.equal);
  const auto r4 = raw_moment_equality(4, 4);
  EXPECT_EQ(r4.moment, 15);
  EXPECT_TRUE(r4.equal);
  EXPECT_FALSE(raw_moment_equality(4, 5).equal);
  for (unsigned N = 1; N <= 12; ++N) {
    for (unsigned k = 0; k <= N; ++k) EXPECT_TRUE(raw_moment_equality(N, k).equal) << N << " " << k;
    EXPECT_FALSE(raw_moment_equality(N, N + 1).equal) << N;
  }
}

TEST(Moments, FkByTuples) {
  std::vector<int> sigma(6);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    const long fixed = std::count_if(sigma.begin(), sigma.end(), [&, i = 0](int v) mutable { return v == i++; });
    for (unsigned k = 0; k <= 6; ++k) EXPECT_EQ(fk_by_tuples(sigma, k), falling(fixed, k));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
}

TEST(Moments, Eta2Fk) {
  EXPECT_EQ(eta2_fk(5, 0), Rational(1, 2));
  EXPECT_EQ(eta2_fk(5, 4), 0);
  EXPECT_EQ(eta2_fk(5, 5), 0);
  for (unsigned N = 3; N <= 7; ++N)
    for (unsigned k = 0; k <= N; ++k) EXPECT_EQ(eta2_fk(N, k), eta2_fk_bruteforce(N, k)) << N << " " << k;
  EXPECT_EQ(eta2_fk_bruteforce(6, 3), Rational(1, 2));
}

TEST(Moments, Gram) {
  for (unsigned N = 2; N <= 7; ++N) {
    const auto g = gram(N);
    EXPECT_TRUE(g.symmetric());
    EXPECT_EQ(g.g[0][0], 1);
    EXPECT_EQ(g.g[1][1], 2);
    for (const auto& v : g.g[0]) EXPECT_EQ(v, 1);
    EXPECT_EQ(g, gram_bruteforce(N)) << N;
  }
  std::ostringstream os;
  write_gram_csv(os, gram(5));
  EXPECT_NE(os.str().find("k,l"), std::string::npos);
}

TEST(Moments, SolveExact) {
  const std::vector<std::vector<Rational>> a = {{2, 1}, {Rational(1, 2), 3}};
  const auto x = solve_exact(a, {3, Rational(7, 2)});
  EXPECT_EQ(x[0], 1);
  EXPECT_EQ(x[1], 1);
  EXPECT_THROW(solve_exact({{1, 2}, {2, 4}}, {1, 1}), std::domain_error);
}

TEST(Moments, CoefficientSystems) {
  for (unsigned N = 4; N <= 10; ++N) {
    const auto s = coefficient_systems(N);
    EXPECT_TRUE(s.f_matches_2p) << N;
    EXPECT_TRUE(s.b_is_one) << N;
    EXPECT_TRUE(s.c_residual_ok) << N;
    const PFunction p = p_closedform(N);
    for (std::size_t i = 0; i < s.index.size(); ++i) EXPECT_EQ(s.f[i], 2 * p(s.index[i]));
    const auto it = std::find(s.index.begin(), s.index.end(), long(N) - 2);
    EXPECT_EQ(s.f[it - s.index.begin()], 2);
    EXPECT_GE(s.functional.lo, 0);
    EXPECT_LE(s.functional.lo, s.functional.hi);
  }
}

TEST(Moments, AlternatingIdentity) {
  for (unsigned N = 2; N <= 30; ++N) EXPECT_TRUE(alternating_identity_holds(N)) << N;
}
