#include "permfix/coupling.hpp"

#include "permfix/kernels.hpp"
#include "permfix/rng.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace permfix {

const char* to_string(Selector s) {
  switch (s) {
    case Selector::check_r: return "check_r";
    case Selector::r_r: return "r_r";
    case Selector::check_rtilde: return "check_rtilde";
  }
  return "?";
}

const char* to_string(Precision p) { return p == Precision::fast ? "fast" : "exact"; }
const char* to_string(StartMode m) { return m == StartMode::shared ? "shared" : "independent"; }

Selector selector_from_string(const std::string& s) {
  if (s == "check_r") return Selector::check_r;
  if (s == "r_r") return Selector::r_r;
  if (s == "check_rtilde") return Selector::check_rtilde;
  throw std::invalid_argument("unknown selector '" + s + "' (check_r, r_r, check_rtilde)");
}

Precision precision_from_string(const std::string& s) {
  if (s == "fast" || s == "double") return Precision::fast;
  if (s == "exact") return Precision::exact;
  throw std::invalid_argument("unknown precision '" + s + "' (fast, exact)");
}

StartMode start_mode_from_string(const std::string& s) {
  if (s == "shared") return StartMode::shared;
  if (s == "independent") return StartMode::independent;
  throw std::invalid_argument("unknown start mode '" + s + "' (shared, independent)");
}

void RunConfig::validate() const {
  if (N < 5) throw std::invalid_argument("RunConfig: N must be >= 5");
  if (horizon < 0) throw std::invalid_argument("RunConfig: horizon must be >= 0");
  if (replicas < 1) throw std::invalid_argument("RunConfig: replicas must be >= 1");
  for (auto c : checkpoints)
    if (c < 0 || c > horizon) throw std::invalid_argument("RunConfig: checkpoint outside [0, horizon]");
}

std::vector<std::int64_t> RunConfig::times() const {
  std::vector<std::int64_t> t = checkpoints;
  t.push_back(horizon);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

nlohmann::json RunConfig::to_json() const {
  return {{"N", N},
          {"n", horizon},
          {"replicas", replicas},
          {"seed", seed},
          {"selector", to_string(selector)},
          {"precision", to_string(precision)},
          {"start", to_string(start)},
          {"emit_traces", emit_traces},
          {"checkpoints", checkpoints},
          {"jobs", jobs}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  c.N = j.at("N").get<unsigned>();
  c.horizon = j.at("n").get<std::int64_t>();
  c.replicas = j.at("replicas").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.selector = selector_from_string(j.at("selector").get<std::string>());
  c.precision = precision_from_string(j.at("precision").get<std::string>());
  c.emit_traces = j.at("emit_traces").get<bool>();
  if (j.contains("start")) c.start = start_mode_from_string(j.at("start").get<std::string>());
  if (j.contains("checkpoints")) c.checkpoints = j.at("checkpoints").get<std::vector<std::int64_t>>();
  if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
  c.validate();
  return c;
}

CouplingPair coupling_pair(unsigned N, Selector s) {
  auto rk = build_restricted(N);
  switch (s) {
    case Selector::check_r: return {rk.check, rk.r, pi_check(N), zeta(N)};
    case Selector::r_r: return {rk.r, rk.r, zeta(N), zeta(N)};
    case Selector::check_rtilde:
      return {rk.check, rk.r_tilde, pi_check(N), birth_death_stationary(rk.r_tilde, "rtilde_stationary")};
  }
  throw std::logic_error("coupling_pair: bad selector");
}

namespace {

long step_exact(long x, const Rational& u, const StochasticKernel& k) {
  const Rational down = k(x, x - 1);
  if (u < down) return x - 1;
  if (u < down + k(x, x)) return x;
  return x + 1;
}

}  // namespace

std::pair<long, long> monotone_step(long x, long y, const Rational& u, const StochasticKernel& kx,
                                    const StochasticKernel& ky) {
  return {step_exact(x, u, kx), step_exact(y, u, ky)};
}

Thresholds thresholds(const StochasticKernel& k) {
  if (k.index_bandwidth() > 1) throw std::invalid_argument("thresholds: kernel is not birth-and-death");
  Thresholds t;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Rational down = i > 0 ? k.at(i, i - 1) : Rational(0);
    t.down.push_back(dyadic53_ceil(down));
    t.stay.push_back(dyadic53_ceil(down + k.at(i, i)));
  }
  return t;
}

std::vector<std::uint64_t> cdf_thresholds(const ExactDist& d, std::size_t states) {
  std::vector<std::uint64_t> out;
  Rational cdf = 0;
  for (std::size_t x = 0; x < states; ++x) {
    cdf += d(static_cast<long>(x));
    out.push_back(dyadic53_ceil(cdf));
  }
  if (cdf != 1) throw std::invalid_argument("cdf_thresholds: law not supported on the state list");
  return out;
}

double Estimate::sigma() const {
  if (replicas == 0) return 0.0;
  const double q = p();
  return std::sqrt(q * (1.0 - q) / static_cast<double>(replicas));
}

nlohmann::json CouplingTrace::to_json() const {
  nlohmann::json steps_j = nlohmann::json::array();
  for (const auto& s : steps) steps_j.push_back({s.x, s.y, s.u, s.flags});
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"replica", replica}, {"x0", x0},         {"y0", y0},
          {"tau", opt(tau)},    {"tau0_x", opt(tau0_x)}, {"tau0_y", opt(tau0_y)},
          {"z_incr", z_incr},   {"ztilde_incr", ztilde_incr}, {"zhat_incr", zhat_incr},
          {"steps", steps_j}};
}

namespace {

struct Setup {
  CouplingPair pair;
  Thresholds tx, ty;
  std::vector<std::uint64_t> cdf_x, cdf_y;
  std::vector<std::int64_t> times;
};

Setup make_setup(const RunConfig& cfg) {
  cfg.validate();
  CouplingPair pair = coupling_pair(cfg.N, cfg.selector);
  Thresholds tx = thresholds(pair.kx), ty = thresholds(pair.ky);
  auto cx = cdf_thresholds(pair.pi_x, pair.kx.size());
  auto cy = cdf_thresholds(pair.pi_y, pair.ky.size());
  return {std::move(pair), std::move(tx), std::move(ty), std::move(cx), std::move(cy), cfg.times()};
}

long inverse_cdf(const std::vector<std::uint64_t>& cdf, std::uint64_t u) {
  return static_cast<long>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

// Initial states from the replica stream; the stream is left positioned at
// the first step uniform.
std::pair<long, long> initial_states(const Setup& s, const RunConfig& cfg, Xoshiro256ss& g) {
  const std::uint64_t ux = g.next53();
  const std::uint64_t uy = cfg.start == StartMode::shared ? ux : g.next53();
  return {inverse_cdf(s.cdf_x, ux), inverse_cdf(s.cdf_y, uy)};
}

void record_start(ReplicaRecord& r, long x, long y) {
  if (x == y) r.tau = 0;
  if (x == 0) r.tau0_x = 0;
  if (y == 0) r.tau0_y = 0;
}

ReplicaRecord run_one(const Setup& s, const RunConfig& cfg, std::uint64_t replica, CouplingTrace* trace) {
  Xoshiro256ss g = Xoshiro256ss::stream(cfg.seed, replica);
  auto [x, y] = initial_states(s, cfg, g);
  ReplicaRecord rec;
  rec.differ.assign(s.times.size(), false);
  record_start(rec, x, y);
  if (trace) {
    trace->replica = replica;
    trace->x0 = x;
    trace->y0 = y;
    trace->steps.reserve(static_cast<std::size_t>(cfg.horizon));
  }
  const Rational two53 = Rational(pow2(53));
  std::size_t next_cp = 0;
  auto checkpoint = [&](std::int64_t n) {
    while (next_cp < s.times.size() && s.times[next_cp] == n) rec.differ[next_cp++] = x != y;
  };
  checkpoint(0);
  for (std::int64_t k = 0; k < cfg.horizon; ++k) {
    const std::uint64_t u = g.next53();
    long nx, ny;
    if (cfg.precision == Precision::exact) {
      std::tie(nx, ny) = monotone_step(x, y, Rational(Integer(u)) / two53, s.pair.kx, s.pair.ky);
    } else {
      const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
      nx = x + (u < s.tx.down[ux] ? -1 : (u < s.tx.stay[ux] ? 0 : 1));
      ny = y + (u < s.ty.down[uy] ? -1 : (u < s.ty.stay[uy] ? 0 : 1));
    }
    const std::int64_t n = k + 1;
    unsigned flags = 0;
    if (nx == ny) rec.tau = std::min(rec.tau, n);
    if (nx == 0) rec.tau0_x = std::min(rec.tau0_x, n);
    if (ny == 0) rec.tau0_y = std::min(rec.tau0_y, n);
    if (x == y && nx != ny) {
      rec.z = std::min(rec.z, n);
      flags |= 1u;
    }
    if (x <= y && nx > ny) {
      rec.ztilde = std::min(rec.ztilde, n);
      flags |= 2u;
    }
    if (x >= y && nx < ny) {
      rec.zhat = std::min(rec.zhat, n);
      flags |= 4u;
    }
    if (trace) {
      trace->steps.push_back({nx, ny, u, flags});
      if (flags & 1u) trace->z_incr.push_back(k);
      if (flags & 2u) trace->ztilde_incr.push_back(k);
      if (flags & 4u) trace->zhat_incr.push_back(k);
    }
    x = nx;
    y = ny;
    checkpoint(n);
  }
  if (trace) {
    auto opt = [](std::int64_t v) { return v == simd::kNever ? std::nullopt : std::optional<std::int64_t>(v); };
    trace->tau = opt(rec.tau);
    trace->tau0_x = opt(rec.tau0_x);
    trace->tau0_y = opt(rec.tau0_y);
  }
  return rec;
}

void run_batch(const Setup& s, const RunConfig& cfg, simd::AdvanceFn advance, std::uint64_t first,
               std::vector<ReplicaRecord>& out) {
  simd::Batch b{};
  const simd::StepTables t{s.tx.down.data(), s.tx.stay.data(), s.ty.down.data(), s.ty.stay.data()};
  std::vector<ReplicaRecord> lanes(simd::kLanes);
  for (int l = 0; l < simd::kLanes; ++l) {
    Xoshiro256ss g = Xoshiro256ss::stream(cfg.seed, first + static_cast<std::uint64_t>(l));
    auto [x, y] = initial_states(s, cfg, g);
    for (int w = 0; w < 4; ++w) b.rng[w][l] = g.state()[w];
    b.x[l] = x;
    b.y[l] = y;
    ReplicaRecord r;
    record_start(r, x, y);
    b.tau[l] = r.tau;
    b.tau0x[l] = r.tau0_x;
    b.tau0y[l] = r.tau0_y;
    b.z[l] = b.zt[l] = b.zh[l] = simd::kNever;
    lanes[static_cast<std::size_t>(l)].differ.assign(s.times.size(), false);
  }
  std::int64_t now = 0;
  for (std::size_t c = 0; c < s.times.size(); ++c) {
    advance(b, t, now, s.times[c]);
    now = s.times[c];
    for (int l = 0; l < simd::kLanes; ++l) lanes[static_cast<std::size_t>(l)].differ[c] = b.x[l] != b.y[l];
  }
  for (int l = 0; l < simd::kLanes; ++l) {
    const std::uint64_t r = first + static_cast<std::uint64_t>(l);
    if (r >= cfg.replicas) break;
    auto& rec = lanes[static_cast<std::size_t>(l)];
    rec.tau = b.tau[l];
    rec.tau0_x = b.tau0x[l];
    rec.tau0_y = b.tau0y[l];
    rec.z = b.z[l];
    rec.ztilde = b.zt[l];
    rec.zhat = b.zh[l];
    out[r] = std::move(rec);
  }
}

}  // namespace

std::vector<ReplicaRecord> run_replicas(const RunConfig& cfg, const TraceSink& sink) {
  const Setup s = make_setup(cfg);
  std::vector<ReplicaRecord> out(cfg.replicas);
  const bool per_replica = cfg.precision == Precision::exact || (cfg.emit_traces && sink);
  if (per_replica) {
    for (std::uint64_t r = 0; r < cfg.replicas; ++r) {
      if (cfg.emit_traces && sink) {
        CouplingTrace tr;
        out[r] = run_one(s, cfg, r, &tr);
        sink(tr);
      } else {
        out[r] = run_one(s, cfg, r, nullptr);
      }
    }
    return out;
  }
  const simd::AdvanceFn advance = simd::select_advance(cfg.isa);
  const std::uint64_t batches = (cfg.replicas + simd::kLanes - 1) / simd::kLanes;
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(std::min<std::uint64_t>(batches, 256))));
  // Each worker owns a fixed stride of batches; results land at their
  // replica index, so the outcome does not depend on the job count.
  auto work = [&](unsigned w) {
    for (std::uint64_t b = w; b < batches; b += jobs) run_batch(s, cfg, advance, b * simd::kLanes, out);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return out;
}

CouplingResult run_coupling(const RunConfig& cfg, const TraceSink& sink) {
  const auto records = run_replicas(cfg, sink);
  CouplingResult res;
  res.config = cfg;
  const bool batched = !(cfg.precision == Precision::exact || (cfg.emit_traces && sink));
  res.isa = batched ? simd::isa_name(simd::resolve(cfg.isa)) : "per-replica";
  const auto times = cfg.times();
  for (std::size_t c = 0; c < times.size(); ++c) {
    CheckpointAggregate a;
    a.n = times[c];
    for (Estimate* e : {&a.differ, &a.tau_gt, &a.z_pos, &a.ztilde_pos, &a.zhat_pos, &a.tau0x_gt, &a.tau0y_gt})
      e->replicas = cfg.replicas;
    for (const auto& r : records) {
      a.differ.count += r.differ[c];
      a.tau_gt.count += r.tau > a.n;
      a.z_pos.count += r.z <= a.n;
      a.ztilde_pos.count += r.ztilde <= a.n;
      a.zhat_pos.count += r.zhat <= a.n;
      a.tau0x_gt.count += r.tau0_x > a.n;
      a.tau0y_gt.count += r.tau0_y > a.n;
    }
    res.checkpoints.push_back(a);
  }
  return res;
}

namespace {

std::vector<std::pair<const char*, const Estimate*>> named(const CheckpointAggregate& a) {
  return {{"P[X(n)!=Y(n)]", &a.differ},      {"P[tau>n]", &a.tau_gt},          {"P[Z(n)>0]", &a.z_pos},
          {"P[Ztilde(n)>0]", &a.ztilde_pos}, {"P[Zhat(n)>0]", &a.zhat_pos},    {"P[tau0X>n]", &a.tau0x_gt},
          {"P[tau0Y>n]", &a.tau0y_gt}};
}

}  // namespace

void write_aggregates_csv(std::ostream& os, const CouplingResult& r) {
  os << "N,n,replicas,seed,selector,start,quantity,count,p,sigma\n";
  for (const auto& a : r.checkpoints)
    for (const auto& [name, e] : named(a))
      os << r.config.N << ',' << a.n << ',' << r.config.replicas << ',' << r.config.seed << ','
         << to_string(r.config.selector) << ',' << to_string(r.config.start) << ',' << name << ',' << e->count << ','
         << e->p() << ',' << e->sigma() << '\n';
}

nlohmann::json aggregates_to_json(const CouplingResult& r) {
  nlohmann::json cps = nlohmann::json::array();
  for (const auto& a : r.checkpoints) {
    nlohmann::json q = nlohmann::json::object();
    for (const auto& [name, e] : named(a)) q[name] = {{"count", e->count}, {"p", e->p()}, {"sigma", e->sigma()}};
    cps.push_back({{"n", a.n}, {"estimates", q}});
  }
  return {{"config", r.config.to_json()}, {"isa", r.isa}, {"checkpoints", cps}};
}

MonotonicityReport monotonicity_certificate(const StochasticKernel& k) {
  if (k.index_bandwidth() > 1) throw std::invalid_argument("monotonicity_certificate: kernel is not birth-and-death");
  MonotonicityReport rep;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const Rational lhs = (i > 0 ? k.at(i, i - 1) : Rational(0)) + k.at(i, i);
    const Rational m = lhs - k.at(i + 1, i);
    rep.margins.push_back(m);
    if (m < 0 && rep.pass) {
      rep.pass = false;
      rep.first_failure = static_cast<long>(i);
    }
  }
  return rep;
}

Real DriftCertificate::tail_bound(std::int64_t n) const {
  PrecisionScope ps(50);
  const Real n3 = Real(N) * N * N;
  return exp(Real(1) - c_est * Real(n) / n3);
}

DriftCertificate drift_certificate(unsigned N, const Rational& up_offset, unsigned lambda_scale) {
  if (N < 5) throw std::invalid_argument("drift_certificate: N must be >= 5");
  PrecisionScope ps(50);
  DriftCertificate c;
  c.N = N;
  c.up_offset = up_offset;
  c.lambda_scale = lambda_scale;
  const Real n = N;
  const Real lambda = Real(1) / (Real(lambda_scale) * n);
  const Real a = (exp(-lambda) - 1) / (n * (n - 1));
  const Real b = (exp(lambda) - 1) / (n * (n - 1));
  const Real off = to_real(up_offset);
  for (long y = 1; y <= static_cast<long>(N) - 4; ++y) {
    const Real yy = y;
    c.f.push_back(1 + a * yy * (n - yy) + b * (n - yy - off));
  }
  c.argmax = 1;
  c.max_f = c.f.front();
  for (std::size_t i = 1; i < c.f.size(); ++i)
    if (c.f[i] > c.max_f) {
      c.max_f = c.f[i];
      c.argmax = static_cast<long>(i) + 1;
    }
  c.max_at_endpoint = c.max_f == c.f.front() || c.max_f == c.f.back();
  c.c_est = n * n * n * (1 - c.max_f);
  c.minimizer = (n + (exp(lambda) - 1) / (1 - exp(-lambda))) / 2;
  c.displayed_minimizer = (exp(lambda) - 1 + n) / (2 * (1 - exp(-lambda)));
  return c;
}

DriftCertificate drift_certificate_search(unsigned N, const Rational& up_offset) {
  DriftCertificate best = drift_certificate(N, up_offset, 1);
  for (unsigned s : {2u, 4u, 8u, 16u}) {
    DriftCertificate c = drift_certificate(N, up_offset, s);
    if (c.c_est > best.c_est) best = std::move(c);
  }
  return best;
}

TvBound assemble_tv_bound(unsigned N, std::int64_t n, const Real& c_x, const Real& c_y,
                          const CheckpointAggregate* est) {
  PrecisionScope ps(50);
  TvBound t;
  t.n = n;
  const Real nn = Real(N);
  const Real n3 = nn * nn * nn;
  const Real poly = Real(5) * to_real(Rational(pow2(N) * Integer(n), factorial(N)));
  const Real c_hat = c_x < c_y ? c_x : c_y;
  t.analytic = poly + exp(1 - c_x * Real(n) / n3) + exp(1 - c_y * Real(n) / n3);
  t.analytic_min = poly + 2 * exp(1 - c_hat * Real(n) / n3);
  if (est) {
    const Estimate* terms[] = {&est->z_pos, &est->ztilde_pos, &est->zhat_pos, &est->tau0x_gt, &est->tau0y_gt};
    double sum = 0, up = 0;
    for (const Estimate* e : terms) {
      sum += e->p();
      up += e->p() + 3 * e->sigma();
    }
    t.empirical = sum;
    t.empirical_upper = up;
  }
  return t;
}

std::pair<std::int64_t, std::int64_t> default_horizons(unsigned N, const Real& c_hat) {
  if (!(c_hat > 0)) throw std::domain_error("default_horizons: drift constant must be positive");
  PrecisionScope ps(50);
  const Real n = N;
  const Real lg = log(n);
  const Real h4 = ceil(n * n * n * n * lg / c_hat);
  const Real h1 = ceil(n * lg / c_hat);
  return {h4.convert_to<std::int64_t>(), h1.convert_to<std::int64_t>()};
}

}  // namespace permfix
