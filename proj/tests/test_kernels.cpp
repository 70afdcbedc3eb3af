#include "permfix/kernels.hpp"
#include "permfix/perm.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace permfix;

TEST(Kernels, StateSpace) {
  EXPECT_EQ(fixed_point_states(1), (std::vector<long>{1}));
  EXPECT_EQ(fixed_point_states(5), (std::vector<long>{0, 1, 2, 3, 5}));
}

TEST(Kernels, PValues) {
  EXPECT_EQ(p_closedform(4)(0), Rational(2, 3));
  const PFunction p = p_closedform(6);
  EXPECT_EQ(p(4), 1);  // p(N-2) = 1: the two non-fixed points form a 2-cycle
  EXPECT_EQ(p(3), 0);  // p(N-3) = 0: the other three points form a 3-cycle
  EXPECT_EQ(p(6), 0);
  EXPECT_THROW(p(5), std::out_of_range);
}

TEST(Kernels, TripleAgreement) {
  for (unsigned N = 4; N <= 8; ++N) {
    const PFunction a = p_bruteforce(N), b = p_closedform(N), c = p_recursion(N);
    EXPECT_EQ(a, b) << N;
    EXPECT_EQ(b, c) << N;
  }
  for (unsigned N = 9; N <= 30; ++N) EXPECT_EQ(p_closedform(N), p_recursion(N)) << N;
}

TEST(Kernels, BruteforceGuard) {
  EXPECT_THROW(p_bruteforce(9), std::out_of_range);
  EXPECT_NO_THROW(p_bruteforce(5, 5));
}

TEST(Kernels, PBounds) {
  for (unsigned N = 4; N <= 30; ++N) {
    const auto r = check_p_bounds(p_closedform(N));
    EXPECT_TRUE(r.factorial_bound) << N;
    EXPECT_TRUE(r.linear_bound) << N;
    EXPECT_TRUE(r.quarter) << N;
    EXPECT_TRUE(r.alternation) << N;
  }
}

TEST(Kernels, PCsv) {
  std::ostringstream os;
  write_p_csv(os, p_closedform(5));
  const std::string s = os.str();
  EXPECT_NE(s.find("N,x,p_num"), std::string::npos);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 5);  // header + x = 0..3
}

TEST(Kernels, PentaEntries) {
  const StochasticKernel P = build_penta(4, p_closedform(4));
  EXPECT_EQ(P(2, 4), Rational(1, 6));
  EXPECT_EQ(P(4, 2), 1);
  EXPECT_EQ(P(0, 2), Rational(2 * 2, 3 * 12));
  EXPECT_EQ(P.state_bandwidth(), 2);
}

TEST(Kernels, PentaRejectsMassOutsideV) {
  std::vector<Rational> v(5, Rational(1, 2));  // p(N-3) = 1/2 sends mass to N-1
  v.back() = 0;
  EXPECT_THROW(build_penta(5, PFunction(5, PSource::constant, v)), std::logic_error);
  std::vector<Rational> big(5, Rational(0));
  big[0] = 4;  // up rate N - 0 - 2p < 0
  EXPECT_THROW(build_penta(5, PFunction(5, PSource::constant, big)), std::invalid_argument);
}

TEST(Kernels, ReversibilitySuites) {
  for (unsigned N = 4; N <= 12; ++N) {
    const PFunction p = p_recursion(N);
    const ExactDist pi = fixed_point_pmf(N);
    EXPECT_TRUE(check_reversibility(build_penta(N, p), pi).pass()) << N;
    EXPECT_TRUE(check_reversibility(build_tilde(N, p), pi).pass()) << N;
    EXPECT_TRUE(check_reversibility(build_hat(N, p), hat_stationary(N)).pass()) << N;
    EXPECT_TRUE(is_invariant(build_penta(N, p), pi));
    if (N >= 5) {
      const auto rk = build_restricted(N, p);
      EXPECT_TRUE(check_reversibility(rk.check, pi_check(N)).pass()) << N;
      EXPECT_TRUE(check_reversibility(rk.r, zeta(N)).pass()) << N;
      EXPECT_FALSE(check_reversibility(rk.r_tilde, zeta(N)).pass()) << N;
    }
  }
}

TEST(Kernels, HatOrdering) {
  EXPECT_EQ(hat_ordering(6), (std::vector<long>{3, 1, 0, 2, 4, 6}));
  EXPECT_EQ(hat_ordering(7), (std::vector<long>{4, 2, 0, 1, 3, 5, 7}));
  for (unsigned N = 4; N <= 12; ++N) {
    auto z = hat_ordering(N);
    std::sort(z.begin(), z.end());
    EXPECT_EQ(z, fixed_point_states(N));
    EXPECT_EQ(build_hat(N).index_bandwidth(), 1u);
  }
}

TEST(Kernels, BirthDeathStationaryRecoversPi) {
  for (unsigned N = 5; N <= 12; ++N) {
    EXPECT_EQ(birth_death_stationary(build_hat(N), "h").weights(), hat_stationary(N).weights());
    EXPECT_EQ(birth_death_stationary(build_restricted(N).r, "z").weights(), zeta(N).weights());
  }
}

TEST(Kernels, RestrictedBoundary) {
  const auto rk = build_restricted(8);
  EXPECT_EQ(rk.r.size(), 5u);
  EXPECT_EQ(rk.r(4, 5), 0);
  EXPECT_EQ(rk.r(3, 4), Rational(8 - 3 - 1, 56));
  EXPECT_EQ(rk.r_tilde(3, 4), Rational(9, 2 * 56));
  EXPECT_EQ(rk.check(2, 1), Rational(2 * 6, 56));
}

TEST(Kernels, PoissonReversibleKernel) {
  for (unsigned N = 4; N <= 12; ++N) {
    const StochasticKernel K = poisson_reversible_kernel(N);
    EXPECT_TRUE(check_reversibility(K, poisson_conditioned(N)).pass()) << N;
  }
}

TEST(Kernels, RecursionMapPole) {
  EXPECT_THROW(recursion_map(6, 0, Rational(25)), std::domain_error);
  EXPECT_EQ(recursion_map(6, 3, Rational(0)), Rational(3 * 2, 4));
}

TEST(Kernels, JsonRoundTrip) {
  const StochasticKernel P = build_penta(7, p_recursion(7));
  const auto back = StochasticKernel::from_json(P.to_json());
  EXPECT_EQ(back.matrix(), P.matrix());
  EXPECT_EQ(back.states(), P.states());
}
