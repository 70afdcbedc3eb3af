#include "permfix/altcouplings.hpp"

#include "permfix/perm.hpp"
#include "permfix/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace permfix {

ExactDist mallows_exact_pmf(unsigned N) {
  if (N < 1) throw std::invalid_argument("mallows_exact_pmf: N must be >= 1");
  // dp[b][s]: P[X_i = b, sum_{j<i} X_j X_{j+1} = s].
  std::vector<std::vector<Rational>> dp(2, std::vector<Rational>(N + 1));
  dp[1][0] = 1;  // X_1 = 1
  for (unsigned i = 2; i <= N; ++i) {
    std::vector<std::vector<Rational>> next(2, std::vector<Rational>(N + 1));
    const Rational p1(1, static_cast<long>(i));
    const Rational p0 = 1 - p1;
    for (int b = 0; b < 2; ++b)
      for (unsigned s = 0; s < N; ++s) {
        const Rational& w = dp[static_cast<std::size_t>(b)][s];
        if (w == 0) continue;
        next[0][s] += w * p0;
        next[1][s + static_cast<unsigned>(b)] += w * p1;
      }
    dp = std::move(next);
  }
  std::vector<Rational> law(N + 1);
  for (unsigned s = 0; s <= N; ++s) {
    law[s] += dp[0][s];
    if (s + 1 <= N) law[s + 1] += dp[1][s];  // + X_N
  }
  std::vector<long> support;
  std::vector<Rational> w;
  for (unsigned s = 0; s <= N; ++s)
    if (law[s] != 0) {
      support.push_back(s);
      w.push_back(law[s]);
    }
  return ExactDist("mallows_" + std::to_string(N), std::move(support), std::move(w));
}

long mallows_s_n(const std::vector<std::int64_t>& ones, unsigned N) {
  long s = 0;
  for (std::size_t i = 0; i + 1 < ones.size(); ++i)
    if (ones[i + 1] == ones[i] + 1 && ones[i] < static_cast<std::int64_t>(N)) ++s;
  if (std::binary_search(ones.begin(), ones.end(), static_cast<std::int64_t>(N))) ++s;
  return s;
}

long mallows_s_trunc(const std::vector<std::int64_t>& ones, std::int64_t K) {
  long s = 0;
  for (std::size_t i = 0; i + 1 < ones.size(); ++i)
    if (ones[i + 1] == ones[i] + 1 && ones[i] < K) ++s;
  return s;
}

MallowsSample mallows_sample(unsigned N, std::int64_t K, std::uint64_t seed, std::uint64_t replica) {
  if (K < static_cast<std::int64_t>(N) + 1) throw std::invalid_argument("mallows_sample: K must be >= N+1");
  Xoshiro256ss g = Xoshiro256ss::stream(seed, replica);
  MallowsSample s;
  s.N = N;
  s.K = K;
  s.tail_bound = Rational(1, K);
  std::int64_t m = 1;
  s.ones.push_back(1);
  for (;;) {
    const std::uint64_t u = g.next53();
    if (u == 0) break;  // U = 0: no further one
    // floor(m / (u / 2^53)) + 1 in exact integer arithmetic.
    const unsigned __int128 q = (static_cast<unsigned __int128>(m) << 53) / u;
    if (q >= static_cast<unsigned __int128>(K)) break;
    m = static_cast<std::int64_t>(q) + 1;
    s.ones.push_back(m);
  }
  s.s_n = mallows_s_n(s.ones, N);
  s.s_trunc = mallows_s_trunc(s.ones, K);
  return s;
}

MallowsDiscrepancy mallows_discrepancy(unsigned N, std::uint64_t replicas, std::int64_t K, std::uint64_t seed) {
  MallowsDiscrepancy d;
  d.N = N;
  d.K = K;
  d.replicas = replicas;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    const auto s = mallows_sample(N, K, seed, r);
    d.disagreements += s.s_n != s.s_trunc;
  }
  d.estimate = static_cast<double>(d.disagreements) / static_cast<double>(replicas);
  d.sigma = std::sqrt(d.estimate * (1 - d.estimate) / static_cast<double>(replicas));
  d.tail_bound = 1.0 / static_cast<double>(K);
  return d;
}

long ascent_peak_m(long s, long t) { return s - ((t - s) % 2 != 0 ? 1 : 0); }

long ascent_peak_m_n(long s, long t, unsigned N) {
  const long n = N;
  return ascent_peak_m(std::min(s, n), std::min(t, n));
}

namespace {

// Scans u[0..] (U_1 = u[0]); fills s and t once determined.
void scan(AscentPeakSample& a) {
  const auto& u = a.u;
  a.s = a.t = 0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (u[i] == u[i + 1]) a.tie = true;
    const long n = static_cast<long>(i) + 1;
    if (a.s == 0 && u[i] < u[i + 1]) a.s = n;
    if (a.t == 0 && n >= 2 && u[i] > u[i - 1] && u[i] > u[i + 1]) a.t = n;
  }
  if (a.s && a.t) a.m = ascent_peak_m(a.s, a.t);
}

}  // namespace

AscentPeakSample ascent_peak_from(const std::vector<double>& u) {
  AscentPeakSample a;
  a.u = u;
  scan(a);
  return a;
}

AscentPeakSample ascent_peak_sample(std::uint64_t seed, std::uint64_t replica) {
  Xoshiro256ss g = Xoshiro256ss::stream(seed, replica);
  AscentPeakSample a;
  a.u.push_back(g.uniform());
  a.u.push_back(g.uniform());
  // A peak at n needs U_{n+1}; draw until both times are known.
  for (;;) {
    const std::size_t k = a.u.size();  // newest is U_k
    if (a.u[k - 2] == a.u[k - 1]) a.tie = true;
    const long n = static_cast<long>(k) - 1;
    if (a.s == 0 && a.u[k - 2] < a.u[k - 1]) a.s = n;
    if (n >= 2 && a.u[k - 2] > a.u[k - 3] && a.u[k - 2] > a.u[k - 1]) {
      a.t = n;
      break;
    }
    a.u.push_back(g.uniform());
  }
  a.m = ascent_peak_m(a.s, a.t);
  return a;
}

double AscentPeakBatch::disagreement_rate(unsigned N) const {
  const std::uint64_t valid = samples - ties;
  auto it = disagreements.find(N);
  return valid && it != disagreements.end() ? static_cast<double>(it->second) / static_cast<double>(valid) : 0.0;
}

double AscentPeakBatch::disagreement_sigma(unsigned N) const {
  const double p = disagreement_rate(N);
  const std::uint64_t valid = samples - ties;
  return valid ? std::sqrt(p * (1 - p) / static_cast<double>(valid)) : 0.0;
}

AscentPeakBatch ascent_peak_batch(const std::vector<unsigned>& Ns, std::uint64_t samples, std::uint64_t seed) {
  AscentPeakBatch b;
  b.samples = samples;
  for (unsigned N : Ns) b.disagreements[N] = 0;
  for (std::uint64_t r = 0; r < samples; ++r) {
    const auto a = ascent_peak_sample(seed, r);
    if (a.tie) {
      ++b.ties;
      continue;
    }
    ++b.m_counts[a.m];
    for (unsigned N : Ns) {
      const long mn = ascent_peak_m_n(a.s, a.t, N);
      ++b.m_n_counts[N][mn];
      b.disagreements[N] += mn != a.m;
    }
  }
  return b;
}

double empirical_tv_poisson(const std::map<long, std::uint64_t>& counts, std::uint64_t samples) {
  double tv = 0;
  for (const auto& [x, c] : counts) {
    const double q = std::exp(-1.0 - std::lgamma(static_cast<double>(x) + 1.0));
    tv += std::max(0.0, static_cast<double>(c) / static_cast<double>(samples) - q);
  }
  return tv;
}

double empirical_tv(const std::map<long, std::uint64_t>& counts, std::uint64_t samples, const ExactDist& d) {
  double tv = 0;
  for (const auto& [x, c] : counts) {
    const double q = d(x).convert_to<double>();
    tv += std::max(0.0, static_cast<double>(c) / static_cast<double>(samples) - q);
  }
  return tv;
}

Rational peak_tail_exact(unsigned N) {
  if (N < 1) throw std::invalid_argument("peak_tail_exact: N must be >= 1");
  require_within_guard("peak_tail_exact", N, enumeration_guard(10));
  // T > N iff none of U_2..U_N is a peak; depends on the order of U_1..U_{N+1}.
  std::vector<int> r(N + 1);
  std::iota(r.begin(), r.end(), 0);
  std::uint64_t c = 0;
  do {
    bool peak = false;
    for (unsigned n = 2; n <= N && !peak; ++n) peak = r[n - 1] > r[n - 2] && r[n - 1] > r[n];
    c += !peak;
  } while (std::next_permutation(r.begin(), r.end()));
  return Rational(Integer(c), factorial(N + 1));
}

Rational peak_tail_bound(unsigned N) { return Rational(pow2(N), factorial(N + 1)); }

}  // namespace permfix
