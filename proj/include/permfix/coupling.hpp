#pragma once

// Monotone coupling of two birth-and-death chains on {0..N-4} driven by a
// shared uniform per step, the counters Z, Z~, Z^ and the hitting times
// of zero, together with the exact certificates used to bound their tails.

#include "permfix/exactdist.hpp"
#include "permfix/kernel.hpp"
#include "permfix/simd/batch.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace permfix {

enum class Selector { check_r, r_r, check_rtilde };
enum class Precision { fast, exact };
enum class StartMode { shared, independent };

const char* to_string(Selector s);
const char* to_string(Precision p);
const char* to_string(StartMode m);
Selector selector_from_string(const std::string& s);
Precision precision_from_string(const std::string& s);
StartMode start_mode_from_string(const std::string& s);

struct RunConfig {
  unsigned N = 10;
  std::int64_t horizon = 1000;
  std::uint64_t replicas = 1000;
  std::uint64_t seed = 1;
  Selector selector = Selector::check_r;
  Precision precision = Precision::fast;
  StartMode start = StartMode::shared;
  bool emit_traces = false;
  /// Extra times n <= horizon at which aggregates are reported.
  std::vector<std::int64_t> checkpoints;
  unsigned jobs = 1;
  simd::Isa isa = simd::Isa::best;

  void validate() const;
  /// Sorted, deduplicated checkpoints including the horizon.
  std::vector<std::int64_t> times() const;

  nlohmann::json to_json() const;
  /// Keys N, n, replicas, seed, selector, precision, emit_traces; optional
  /// start, checkpoints, jobs.
  static RunConfig from_json(const nlohmann::json& j);
};

/// Kernels and initial laws for a selector: X ~ K_X from pi_x, Y ~ K_Y from pi_y.
struct CouplingPair {
  StochasticKernel kx;
  StochasticKernel ky;
  ExactDist pi_x;
  ExactDist pi_y;
};

CouplingPair coupling_pair(unsigned N, Selector s);

/// x' = x-1 if u < K(x,x-1), x if u < K(x,x-1)+K(x,x), else x+1; the same
/// uniform drives both coordinates.
std::pair<long, long> monotone_step(long x, long y, const Rational& u, const StochasticKernel& kx,
                                    const StochasticKernel& ky);

/// Integer thresholds ceil(K * 2^53) for a birth-and-death kernel on 0..M.
struct Thresholds {
  std::vector<std::uint64_t> down;
  std::vector<std::uint64_t> stay;
};

Thresholds thresholds(const StochasticKernel& k);
/// ceil(cdf * 2^53) for the inverse-CDF draw of an initial state.
std::vector<std::uint64_t> cdf_thresholds(const ExactDist& d, std::size_t states);

struct TraceStep {
  long x;
  long y;
  std::uint64_t u;  ///< 53-bit integer; the uniform is u / 2^53
  unsigned flags;   ///< bit 0: Z, bit 1: Z~, bit 2: Z^ incremented at this step
};

struct CouplingTrace {
  std::uint64_t replica = 0;
  long x0 = 0;
  long y0 = 0;
  std::vector<TraceStep> steps;  ///< steps[k] holds X(k+1), Y(k+1) and U(k)
  std::optional<std::int64_t> tau, tau0_x, tau0_y;
  std::vector<std::int64_t> z_incr, ztilde_incr, zhat_incr;  ///< step indices k

  nlohmann::json to_json() const;
};

/// Per-replica summary: first times (kNever when unseen) and X(n) != Y(n)
/// at each checkpoint.
struct ReplicaRecord {
  std::int64_t tau = simd::kNever;
  std::int64_t tau0_x = simd::kNever;
  std::int64_t tau0_y = simd::kNever;
  std::int64_t z = simd::kNever;
  std::int64_t ztilde = simd::kNever;
  std::int64_t zhat = simd::kNever;
  std::vector<bool> differ;
};

struct Estimate {
  std::uint64_t count = 0;
  std::uint64_t replicas = 0;
  double p() const { return replicas ? static_cast<double>(count) / static_cast<double>(replicas) : 0.0; }
  /// sqrt(p(1-p)/R).
  double sigma() const;
};

struct CheckpointAggregate {
  std::int64_t n = 0;
  Estimate differ, tau_gt, z_pos, ztilde_pos, zhat_pos, tau0x_gt, tau0y_gt;
};

struct CouplingResult {
  RunConfig config;
  std::string isa;
  std::vector<CheckpointAggregate> checkpoints;
};

using TraceSink = std::function<void(const CouplingTrace&)>;

/// Runs all replicas. Fast precision uses integer thresholds (batched, SIMD
/// when available); exact precision compares u/2^53 against the rational
/// kernel entries. With emit_traces the sink receives every trace in
/// replica order.
CouplingResult run_coupling(const RunConfig& cfg, const TraceSink& sink = {});

/// Per-replica records, exposed for equivalence tests.
std::vector<ReplicaRecord> run_replicas(const RunConfig& cfg, const TraceSink& sink = {});

void write_aggregates_csv(std::ostream& os, const CouplingResult& r);
nlohmann::json aggregates_to_json(const CouplingResult& r);

struct MonotonicityReport {
  bool pass = true;
  /// K(x,x-1)+K(x,x) - K(x+1,x) for x = 0..M-1.
  std::vector<Rational> margins;
  long first_failure = -1;
};

MonotonicityReport monotonicity_certificate(const StochasticKernel& k);

struct DriftCertificate {
  unsigned N = 0;
  Rational up_offset;           ///< 1 for R, 1/2 for R~
  unsigned lambda_scale = 1;    ///< lambda = 1/(scale N)
  std::vector<Real> f;          ///< F(y) for y = 1..N-4
  Real max_f;
  long argmax = 0;
  bool max_at_endpoint = false;
  Real c_est;                   ///< N^3 (1 - max F)
  Real minimizer;               ///< stationary point of the quadratic F
  Real displayed_minimizer;     ///< (e^{l}-1+N)/(2(1-e^{-l})), the closed form quoted for it
  bool valid() const { return c_est > 0; }
  /// e^{1 - c n / N^3}, also valid for lambda_scale > 1.
  Real tail_bound(std::int64_t n) const;
};

/// F(y) = 1 + (e^{-l}-1) y(N-y)/(N(N-1)) + (e^{l}-1)(N-y-offset)/(N(N-1)),
/// l = 1/(scale N), at 50 digits.
DriftCertificate drift_certificate(unsigned N, const Rational& up_offset = Rational(1), unsigned lambda_scale = 1);

/// Best certificate over lambda_scale in {1, 2, 4, 8, 16}.
DriftCertificate drift_certificate_search(unsigned N, const Rational& up_offset);

struct TvBound {
  std::int64_t n = 0;
  Real analytic;       ///< 5 2^N n/N! + e^{1-c_X n/N^3} + e^{1-c_Y n/N^3}
  Real analytic_min;   ///< 5 2^N n/N! + 2 e^{1-min(c) n/N^3}
  std::optional<double> empirical;  ///< P[Z>0] + P[Z~>0] + P[Z^>0] + P[tau0X>n] + P[tau0Y>n]
  std::optional<double> empirical_upper;  ///< the same with 3 sigma added per term
};

TvBound assemble_tv_bound(unsigned N, std::int64_t n, const Real& c_x, const Real& c_y,
                          const CheckpointAggregate* estimates = nullptr);

/// ceil(N^4 ln N / c) and ceil(N ln N / c).
std::pair<std::int64_t, std::int64_t> default_horizons(unsigned N, const Real& c_hat);

}  // namespace permfix
