#pragma once

// Two other couplings of the fixed-point law with Poisson(1): independent
// Bernoulli(1/n) bits whose adjacent-pair count gives both laws, and the
// first ascent / first peak statistics of an i.i.d. uniform sequence.

#include "permfix/exactdist.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace permfix {

/// Exact law of S_N = sum_{i<N} X_i X_{i+1} + X_N, P[X_n = 1] = 1/n, by
/// dynamic programming over (last bit, partial sum). Zero-mass points are
/// dropped from the support.
ExactDist mallows_exact_pmf(unsigned N);

struct MallowsSample {
  std::vector<std::int64_t> ones;  ///< positions n <= K with X_n = 1, increasing
  unsigned N = 0;
  std::int64_t K = 0;
  long s_n = 0;      ///< S_N
  long s_trunc = 0;  ///< sum_{k<K} X_k X_{k+1}
  Rational tail_bound;  ///< 1/K >= sum_{k>=K} 1/(k(k+1))
};

/// Draws X_1..X_K from one stream: after a one at m the next one sits at
/// floor(m/U)+1.
MallowsSample mallows_sample(unsigned N, std::int64_t K, std::uint64_t seed, std::uint64_t replica);

/// S_N recomputed from bits.
long mallows_s_n(const std::vector<std::int64_t>& ones, unsigned N);
long mallows_s_trunc(const std::vector<std::int64_t>& ones, std::int64_t K);

struct MallowsDiscrepancy {
  unsigned N = 0;
  std::int64_t K = 0;
  std::uint64_t replicas = 0;
  std::uint64_t disagreements = 0;
  double estimate = 0;
  double sigma = 0;
  double tail_bound = 0;
};

/// Monte Carlo estimate of P[S_N != S_infinity] with truncation K >= N+1.
MallowsDiscrepancy mallows_discrepancy(unsigned N, std::uint64_t replicas, std::int64_t K, std::uint64_t seed);

struct AscentPeakSample {
  std::vector<double> u;  ///< uniforms consumed
  long s = 0;             ///< first n >= 1 with U_n < U_{n+1}
  long t = 0;             ///< first n >= 2 with U_n > max(U_{n-1}, U_{n+1})
  long m = 0;             ///< S - [T - S odd]
  bool tie = false;       ///< two equal uniforms met; the sample is void
};

long ascent_peak_m(long s, long t);
/// M_N from S_N = min(S,N), T_N = min(T,N).
long ascent_peak_m_n(long s, long t, unsigned N);

/// S and T from a given sequence (used by tests); t = 0 when undetermined.
AscentPeakSample ascent_peak_from(const std::vector<double>& u);
AscentPeakSample ascent_peak_sample(std::uint64_t seed, std::uint64_t replica);

struct AscentPeakBatch {
  std::uint64_t samples = 0;
  std::uint64_t ties = 0;
  std::map<long, std::uint64_t> m_counts;
  std::map<unsigned, std::map<long, std::uint64_t>> m_n_counts;
  std::map<unsigned, std::uint64_t> disagreements;  ///< M != M_N

  double disagreement_rate(unsigned N) const;
  double disagreement_sigma(unsigned N) const;
};

AscentPeakBatch ascent_peak_batch(const std::vector<unsigned>& Ns, std::uint64_t samples, std::uint64_t seed);

/// Half-convention distance between an empirical law and Poisson(1) / an
/// exact law, in double precision.
double empirical_tv_poisson(const std::map<long, std::uint64_t>& counts, std::uint64_t samples);
double empirical_tv(const std::map<long, std::uint64_t>& counts, std::uint64_t samples, const ExactDist& d);

/// P[T > N] from all (N+1)! orderings of U_1..U_{N+1}; guard 10.
Rational peak_tail_exact(unsigned N);
Rational peak_tail_bound(unsigned N);  ///< 2^N/(N+1)!

}  // namespace permfix
