// permfix: command-line driver over the library modules.
//
//   permfix exact   --n 4..15 [--digits D]
//   permfix kernel  --n 4..12
//   permfix project --n 6
//   permfix couple  [--config c.json] [--n N] [--horizon n] [--replicas R] [--seed S] [--jobs J]
//   permfix alt     --n 2..10 [--replicas R] [--seed S]
//   permfix moments --n 7
//   permfix all
//
// Every run writes its tables to --out (csv or json) plus report.json, prints
// one line per verdict, and exits 1 iff some verdict is "fail".

#include "permfix/altcouplings.hpp"
#include "permfix/coupling.hpp"
#include "permfix/exactdist.hpp"
#include "permfix/kernels.hpp"
#include "permfix/lumping.hpp"
#include "permfix/moments.hpp"
#include "permfix/perm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace permfix;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string n;  // "N" or "a..b"; empty means the subcommand default
  std::uint64_t seed = 1;
  std::uint64_t replicas = 0;
  std::int64_t horizon = 0;
  unsigned digits = 50;
  unsigned jobs = 1;
  std::string out = "permfix-out";
  std::string format = "csv";
  std::string config;
};

struct Verdict {
  std::string name;
  std::string state;  // pass | fail | skipped-guard
  std::string detail;
};

class Report {
 public:
  Report(std::string command, fs::path dir, std::string format)
      : command_(std::move(command)), dir_(std::move(dir)), format_(std::move(format)) {
    fs::create_directories(dir_);
  }

  const std::string& format() const { return format_; }

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    add({name, ok ? "pass" : "fail", detail});
  }
  void skip(const std::string& name, unsigned N, unsigned guard) {
    add({name, "skipped-guard", "N=" + std::to_string(N) + " exceeds enumeration guard " + std::to_string(guard)});
  }
  void add(Verdict v) {
    std::printf("%-13s %-44s %s\n", v.state.c_str(), v.name.c_str(), v.detail.c_str());
    verdicts_.push_back(std::move(v));
  }
  bool failed() const {
    for (const auto& v : verdicts_)
      if (v.state == "fail") return true;
    return false;
  }

  std::ofstream open(const std::string& name) {
    outputs_.push_back(name);
    std::ofstream os(dir_ / name);
    if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
    return os;
  }
  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << "\n"; }

  json finish(const json& config, std::uint64_t seed, double wall) {
    json r;
    r["command"] = command_;
    r["config"] = config;
    r["config_hash"] = hash_hex(config.dump());
    r["seed"] = seed;
    outputs_.push_back("report.json");
    r["outputs"] = outputs_;
    r["wall_time_s"] = wall;
    json vs = json::array();
    for (const auto& v : verdicts_) vs.push_back({{"name", v.name}, {"state", v.state}, {"detail", v.detail}});
    r["verdicts"] = vs;
    r["pass"] = !failed();
    std::ofstream(dir_ / "report.json") << r.dump(2) << "\n";
    return r;
  }

 private:
  // FNV-1a, 64 bit.
  static std::string hash_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  std::string command_;
  fs::path dir_;
  std::string format_;
  std::vector<std::string> outputs_;
  std::vector<Verdict> verdicts_;
};

// Tabular output in either format; cells are kept as strings so exact
// rationals survive.
struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<std::string>> rows;

  void write(Report& rep, const std::string& stem) const {
    if (rep.format() == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        json o = json::object();
        for (std::size_t i = 0; i < cols.size(); ++i) o[cols[i]] = r[i];
        arr.push_back(o);
      }
      rep.write_json(stem + ".json", arr);
      return;
    }
    auto os = rep.open(stem + ".csv");
    auto cell = [](const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    };
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cell(cols[i]);
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
      os << "\n";
    }
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<unsigned> parse_range(const std::string& spec, const std::string& fallback, unsigned min_n) {
  const std::string s = spec.empty() ? fallback : spec;
  unsigned a = 0, b = 0;
  try {
    const auto dots = s.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      a = b = static_cast<unsigned>(std::stoul(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } else {
      a = static_cast<unsigned>(std::stoul(s.substr(0, dots), &used));
      if (used != dots) throw std::invalid_argument(s);
      const std::string tail = s.substr(dots + 2);
      b = static_cast<unsigned>(std::stoul(tail, &used));
      if (used != tail.size()) throw std::invalid_argument(s);
    }
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--n", "expected N or a..b, got '" + s + "'");
  }
  if (a > b) throw CLI::ValidationError("--n", "empty range " + s);
  if (a < min_n) throw CLI::ValidationError("--n", "N must be >= " + std::to_string(min_n));
  std::vector<unsigned> ns;
  for (unsigned n = a; n <= b; ++n) ns.push_back(n);
  return ns;
}

json range_json(const std::vector<unsigned>& ns) { return {{"from", ns.front()}, {"to", ns.back()}}; }

// ---------------------------------------------------------------- exact

json cmd_exact(const Options& o, Report& rep) {
  const auto ns = parse_range(o.n, "4..15", 1);
  Table pmf{{"N", "x", "weight", "decimal"}, {}};
  Table sum{{"N", "support", "tv_half_lo", "tv_half_hi", "tv_total_lo", "tv_total_hi", "bracket_lo", "bracket_hi",
             "log_rate_total", "log_rate_digits", "separation", "separation_on_support", "argmax_on_support"},
            {}};
  for (unsigned N : ns) {
    const ExactDist pi = fixed_point_pmf(N);
    for (std::size_t i = 0; i < pi.size(); ++i)
      pmf.rows.push_back({std::to_string(N), std::to_string(pi.support()[i]), to_string(pi.weights()[i]),
                          to_decimal(pi.weights()[i], 20)});
    const Interval half = tv_distance_poisson(pi, TvConvention::half, o.digits);
    const Interval total = tv_distance_poisson(pi, TvConvention::total, o.digits);
    const DistanceBracket b = distance_bracket(N);
    const bool inside = total.certainly_ge(b.lower) && total.certainly_le(b.upper);
    rep.check("bracket N=" + std::to_string(N), inside, "[" + to_decimal(b.lower, 8) + ", " + to_decimal(b.upper, 8) + "]");

    std::string rate = "", rate_digits = "";
    if (N >= 2) {
      try {
        const LogRate lr = log_rate(N, TvConvention::total, std::max(o.digits, log_rate_min_digits(N)));
        rate = to_decimal(lr.value, 12);
        rate_digits = std::to_string(lr.digits);
      } catch (const std::runtime_error& e) {
        rep.check("log_rate N=" + std::to_string(N), false, e.what());
      }
    }
    const Interval sep = separation_discrepancy_poisson(pi, o.digits);
    Rational best = -1;
    long arg = -1;
    for (long x : pi.support()) {
      const Interval g = poisson_ratio_gap(N, x, o.digits);
      if (g.midpoint() > best) {
        best = g.midpoint();
        arg = x;
      }
    }
    sum.rows.push_back({std::to_string(N), std::to_string(pi.size()), to_decimal(half.lo, 20), to_decimal(half.hi, 20),
                        to_decimal(total.lo, 20), to_decimal(total.hi, 20), to_decimal(b.lower, 20),
                        to_decimal(b.upper, 20), rate, rate_digits, to_decimal(sep.midpoint(), 12), to_decimal(best, 12),
                        std::to_string(arg)});
  }
  pmf.write(rep, "exact_pmf");
  sum.write(rep, "exact_summary");
  return {{"n", range_json(ns)}, {"digits", o.digits}};
}

// ---------------------------------------------------------------- kernel

json cmd_kernel(const Options& o, Report& rep) {
  const auto ns = parse_range(o.n, "4..12", 4);
  const unsigned guard = enumeration_guard(8);
  Table pt{{"N", "x", "p", "p_decimal"}, {}};
  for (unsigned N : ns) {
    const std::string at = " N=" + std::to_string(N);
    const PFunction cf = p_closedform(N), rec = p_recursion(N);
    rep.check("p closed form = recursion" + at, cf == rec);
    if (N <= guard)
      rep.check("p brute force = closed form" + at, p_bruteforce(N, guard) == cf);
    else
      rep.skip("p brute force = closed form" + at, N, guard);
    const PBoundsReport b = check_p_bounds(cf);
    rep.check("p bounds and sign alternation" + at, b.factorial_bound && b.linear_bound && b.alternation,
              b.first_failure >= 0 ? "first failure at x=" + std::to_string(b.first_failure) : "");
    for (std::size_t i = 0; i < cf.states().size(); ++i)
      pt.rows.push_back({std::to_string(N), std::to_string(cf.states()[i]), to_string(cf.values()[i]),
                         to_decimal(cf.values()[i], 15)});

    const ExactDist pi = fixed_point_pmf(N);
    json kernels;
    auto rev = [&](const StochasticKernel& k, const ExactDist& d, const std::string& name) {
      const ReversibilityReport r = check_reversibility(k, d);
      rep.check("reversible " + name + at, r.pass(), r.pass() ? "" : r.describe());
      kernels[name] = k.to_json();
    };
    rev(build_penta(N, cf), pi, "P");
    rev(build_tilde(N, cf), pi, "P~");
    rev(build_hat(N, cf), hat_stationary(N), "P^");
    if (N >= 5) {
      const RestrictedKernels rk = build_restricted(N, cf);
      rev(rk.check, pi_check(N), "Pv");
      rev(rk.r, zeta(N), "R");
      kernels["R~"] = rk.r_tilde.to_json();
      rep.check("monotone R" + at, monotonicity_certificate(rk.r).pass);
      rep.check("monotone R~" + at, monotonicity_certificate(rk.r_tilde).pass);
      rep.check("monotone Pv" + at, monotonicity_certificate(rk.check).pass);
    }
    rep.write_json("kernels_" + std::to_string(N) + ".json", kernels);
  }
  pt.write(rep, "p_values");
  return {{"n", range_json(ns)}};
}

// ---------------------------------------------------------------- project

json cmd_project(const Options& o, Report& rep) {
  const auto ns = parse_range(o.n, "6", 2);
  const unsigned guard = enumeration_guard(8);
  for (unsigned N : ns) {
    const std::string at = " N=" + std::to_string(N);
    if (N > guard) {
      rep.skip("intertwining" + at, N, guard);
      continue;
    }
    const CycleTypeChain ct = cycle_type_chain(N);
    const Projection pr = project(ct.chain);
    rep.check("intertwining Q Lambda = Lambda P" + at, pr.intertwining);
    rep.check("projected law is pi" + at, pr.mu1 == fixed_point_pmf(N) && pr.mu1_invariant);
    rep.check("reversibility transfers" + at, reversibility_transfer(ct.chain).holds());
    rep.check("Dynkin for S_N -> cycle types" + at, ct.dynkin_on_sn);
    const bool dynkin_eta1 = dynkin_holds(dynkin_check(ct.chain));
    json out = {{"N", N},
                {"partition", partition_to_json(ct.chain)},
                {"projected_kernel", pr.p.to_json()},
                {"intertwining", pr.intertwining},
                {"dynkin_cycle_types_to_eta1", dynkin_eta1}};
    if (N >= 4) {
      const PFunction p = p_closedform(N);
      const StochasticKernel exact = build_penta_projected(N, p), shown = build_penta(N, p);
      rep.check("projection = penta-diagonal projected kernel" + at,
                pr.p.states() == exact.states() && pr.p.matrix() == exact.matrix());
      // Informational: the kernel P used by the other modules has +-1 rates
      // half those of the projection.
      out["equals_build_penta"] = pr.p.states() == shown.states() && pr.p.matrix() == shown.matrix();
    }
    rep.write_json("project_" + std::to_string(N) + ".json", out);
  }
  return {{"n", range_json(ns)}};
}

// ---------------------------------------------------------------- couple

// Field-path diagnostics for the couple config; returns the list of problems.
std::vector<std::string> config_errors(const json& j) {
  std::vector<std::string> errs;
  if (!j.is_object()) return {"/: expected an object"};
  auto need = [&](const char* key, auto pred, const char* what) {
    if (!j.contains(key))
      errs.push_back(std::string("/") + key + ": missing");
    else if (!pred(j.at(key)))
      errs.push_back(std::string("/") + key + ": expected " + what);
  };
  auto uint_ = [](const json& v) { return v.is_number_unsigned(); };
  auto pos = [](const json& v) { return v.is_number_unsigned() && v.get<std::uint64_t>() > 0; };
  need("N", [](const json& v) { return v.is_number_unsigned() && v.get<unsigned>() >= 5; }, "integer >= 5");
  need("n", pos, "integer >= 1");
  need("replicas", pos, "integer >= 1");
  need("seed", uint_, "non-negative integer");
  need("selector", [](const json& v) { return v.is_string(); }, "one of check_r, r_r, check_rtilde");
  need("precision", [](const json& v) { return v.is_string() && (v == "fast" || v == "exact"); }, "\"fast\" or \"exact\"");
  need("emit_traces", [](const json& v) { return v.is_boolean(); }, "boolean");
  if (j.contains("selector") && j["selector"].is_string()) {
    try {
      selector_from_string(j["selector"]);
    } catch (const std::exception&) {
      errs.push_back("/selector: expected one of check_r, r_r, check_rtilde");
    }
  }
  if (j.contains("checkpoints")) {
    if (!j["checkpoints"].is_array())
      errs.push_back("/checkpoints: expected an array");
    else
      for (std::size_t i = 0; i < j["checkpoints"].size(); ++i)
        if (!j["checkpoints"][i].is_number_unsigned()) errs.push_back("/checkpoints/" + std::to_string(i) + ": expected integer");
  }
  static const std::set<std::string> known = {"N",           "n",           "replicas", "seed", "selector", "precision",
                                              "emit_traces", "checkpoints", "start",    "jobs"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) errs.push_back("/" + k + ": unknown key");
  return errs;
}

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json cmd_couple(const Options& o, Report& rep, const CLI::App* sub) {
  RunConfig cfg;
  cfg.N = 8;
  cfg.horizon = 10000;
  cfg.replicas = 1000;
  cfg.checkpoints = {10, 100, 1000};
  if (!o.config.empty()) {
    std::ifstream is(o.config);
    if (!is) throw ConfigError("cannot read " + o.config);
    json j;
    try {
      j = json::parse(is);
    } catch (const json::parse_error& e) {
      throw ConfigError(o.config + ": " + e.what());
    }
    const auto errs = config_errors(j);
    if (!errs.empty()) {
      std::string msg = o.config + ":";
      for (const auto& e : errs) msg += "\n  " + e;
      throw ConfigError(msg);
    }
    cfg = RunConfig::from_json(j);
  }
  auto given = [&](const char* flag) { return sub && sub->count(flag) > 0; };
  if (given("--n")) cfg.N = parse_range(o.n, "", 5).front();
  if (given("--horizon")) cfg.horizon = o.horizon;
  if (given("--replicas")) cfg.replicas = o.replicas;
  if (given("--seed") || o.config.empty()) cfg.seed = o.seed;
  if (given("--jobs")) cfg.jobs = o.jobs;
  std::vector<std::int64_t> cps;
  for (auto c : cfg.checkpoints)
    if (c <= cfg.horizon) cps.push_back(c);
  cfg.checkpoints = cps;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::ofstream traces;
  TraceSink sink;
  if (cfg.emit_traces) {
    traces = rep.open("traces.jsonl");
    sink = [&](const CouplingTrace& t) { traces << t.to_json().dump() << "\n"; };
  }
  const CouplingResult res = run_coupling(cfg, sink);
  if (rep.format() == "json")
    rep.write_json("aggregates.json", aggregates_to_json(res));
  else {
    auto os = rep.open("aggregates.csv");
    write_aggregates_csv(os, res);
  }

  const unsigned N = cfg.N;
  const double two_n = std::ldexp(1.0, static_cast<int>(N));
  const double nfact = factorial(N).convert_to<double>();
  for (const auto& a : res.checkpoints) {
    const std::string at = " n=" + std::to_string(a.n);
    const double n = static_cast<double>(a.n);
    rep.check("P[Z>0] <= 2^N n/N! + 3 sigma" + at, a.z_pos.p() <= two_n * n / nfact + 3 * a.z_pos.sigma(), num(a.z_pos.p()));
    rep.check("P[Z~>0] <= 2^(N+1) n/N! + 3 sigma" + at,
              a.ztilde_pos.p() <= 2 * two_n * n / nfact + 3 * a.ztilde_pos.sigma(), num(a.ztilde_pos.p()));
    rep.check("P[Z^>0] <= 2^(N+1) n/N! + 3 sigma" + at,
              a.zhat_pos.p() <= 2 * two_n * n / nfact + 3 * a.zhat_pos.sigma(), num(a.zhat_pos.p()));
    const double parts = a.tau0x_gt.p() + a.tau0y_gt.p() + a.ztilde_pos.p() + a.zhat_pos.p();
    const double sig = std::max({a.tau0x_gt.sigma(), a.tau0y_gt.sigma(), a.ztilde_pos.sigma(), a.zhat_pos.sigma()});
    rep.check("tails decomposition" + at, a.tau_gt.p() <= parts + 12 * sig, num(a.tau_gt.p()) + " <= " + num(parts));
    if (cfg.selector == Selector::r_r) rep.check("(R,R) never disagree" + at, a.differ.count == 0);
  }
  const CouplingPair pair = coupling_pair(N, cfg.selector);
  rep.check("monotone X kernel", monotonicity_certificate(pair.kx).pass);
  rep.check("monotone Y kernel", monotonicity_certificate(pair.ky).pass);

  // Drift certificates and the assembled distance bound.
  const DriftCertificate dx = drift_certificate(N);
  const DriftCertificate dy =
      cfg.selector == Selector::check_rtilde ? drift_certificate_search(N, Rational(1, 2)) : drift_certificate(N);
  json drift = json::array();
  for (const DriftCertificate* d : {&dx, &dy})
    drift.push_back({{"up_offset", to_string(d->up_offset)},
                     {"lambda_scale", d->lambda_scale},
                     {"max_f", to_decimal(d->max_f, 20)},
                     {"argmax", d->argmax},
                     {"max_at_endpoint", d->max_at_endpoint},
                     {"c_est", to_decimal(d->c_est, 12)},
                     {"minimizer", to_decimal(d->minimizer, 12)},
                     {"displayed_minimizer", to_decimal(d->displayed_minimizer, 12)}});
  rep.write_json("drift.json", drift);
  if (dx.valid() && dy.valid()) {
    Table tb{{"n", "analytic", "analytic_min", "empirical", "empirical_upper"}, {}};
    for (const auto& a : res.checkpoints) {
      const TvBound b = assemble_tv_bound(N, a.n, dx.c_est, dy.c_est, &a);
      tb.rows.push_back({std::to_string(a.n), to_decimal(b.analytic, 12), to_decimal(b.analytic_min, 12),
                         b.empirical ? num(*b.empirical) : "", b.empirical_upper ? num(*b.empirical_upper) : ""});
    }
    const auto h = default_horizons(N, dx.c_est < dy.c_est ? dx.c_est : dy.c_est);
    for (std::int64_t n : {h.first, h.second}) {
      const TvBound b = assemble_tv_bound(N, n, dx.c_est, dy.c_est);
      tb.rows.push_back({std::to_string(n), to_decimal(b.analytic, 12), to_decimal(b.analytic_min, 12), "", ""});
    }
    tb.write(rep, "tv_bound");
  }
  json c = cfg.to_json();
  c["isa"] = res.isa;
  return c;
}

// ---------------------------------------------------------------- alt

json cmd_alt(const Options& o, Report& rep) {
  const auto ns = parse_range(o.n, "2..10", 1);
  const std::uint64_t samples = o.replicas ? o.replicas : 100000;
  const unsigned guard = enumeration_guard(10);
  Table mt{{"N", "K", "replicas", "disagreements", "estimate", "sigma", "N_times_estimate", "tail_bound"}, {}};
  for (unsigned N : ns) {
    rep.check("Mallows law = pi N=" + std::to_string(N), mallows_exact_pmf(N) == fixed_point_pmf(N));
    const MallowsDiscrepancy d = mallows_discrepancy(N, samples, std::int64_t(1) << 40, o.seed + N);
    mt.rows.push_back({std::to_string(N), std::to_string(d.K), std::to_string(d.replicas), std::to_string(d.disagreements),
                       num(d.estimate), num(d.sigma), num(N * d.estimate), num(d.tail_bound)});
  }
  mt.write(rep, "mallows");

  const AscentPeakBatch b = ascent_peak_batch(ns, samples, o.seed);
  const std::uint64_t valid = b.samples - b.ties;
  Table at{{"N", "tv_M_N_vs_pi", "p_disagree", "sigma", "p_tail_exact", "p_tail_bound"}, {}};
  for (unsigned N : ns) {
    std::string exact_s;
    if (N <= guard) {
      const Rational ex = peak_tail_exact(N);
      exact_s = to_decimal(ex, 15);
      rep.check("P[T>N] <= 2^N/(N+1)! N=" + std::to_string(N), ex <= peak_tail_bound(N));
      rep.check("P[M!=M_N] <= P[T>N] + 3 sigma N=" + std::to_string(N),
                b.disagreement_rate(N) <= ex.convert_to<double>() + 3 * b.disagreement_sigma(N));
    } else {
      rep.skip("P[T>N] <= 2^N/(N+1)! N=" + std::to_string(N), N, guard);
    }
    at.rows.push_back({std::to_string(N), num(empirical_tv(b.m_n_counts.at(N), valid, fixed_point_pmf(N))),
                       num(b.disagreement_rate(N)), num(b.disagreement_sigma(N)), exact_s,
                       to_decimal(peak_tail_bound(N), 15)});
  }
  at.write(rep, "ascent_peak");
  Table ml{{"m", "count"}, {}};
  for (const auto& [m, c] : b.m_counts) ml.rows.push_back({std::to_string(m), std::to_string(c)});
  ml.write(rep, "ascent_peak_m");
  std::printf("%-13s %-44s %s\n", "info", "half-TV(M, Poisson)", num(empirical_tv_poisson(b.m_counts, valid)).c_str());
  return {{"n", range_json(ns)}, {"samples", samples}};
}

// ---------------------------------------------------------------- moments

json cmd_moments(const Options& o, Report& rep) {
  const auto ns = parse_range(o.n, "7", 1);
  const unsigned guard = enumeration_guard(8);
  Table mt{{"N", "k", "falling_moment", "raw_moment", "bell"}, {}};
  for (unsigned N : ns) {
    const std::string at = " N=" + std::to_string(N);
    bool falling_ok = true, raw_ok = true;
    for (unsigned k = 0; k <= N + 1; ++k) {
      const Rational f = falling_moment(N, k);
      const RawMomentCheck r = raw_moment_equality(N, k);
      if (k <= N) {
        falling_ok = falling_ok && f == 1;
        raw_ok = raw_ok && r.equal;
      } else {
        raw_ok = raw_ok && !r.equal;
      }
      mt.rows.push_back({std::to_string(N), std::to_string(k), to_string(f), to_string(r.moment), to_string(r.bell)});
    }
    rep.check("falling moments = 1 for k <= N" + at, falling_ok);
    rep.check("raw moments = Bell for k <= N, differ at N+1" + at, raw_ok);
    rep.check("|2p-1| alternating identity" + at, N < 2 || alternating_identity_holds(N));
    const GramMatrix g = gram(N);
    if (N <= guard)
      rep.check("Gram closed form = enumeration" + at, g == gram_bruteforce(N));
    else
      rep.skip("Gram closed form = enumeration" + at, N, guard);
    std::ostringstream gs;
    write_gram_csv(gs, g);
    rep.open("gram_" + std::to_string(N) + ".csv") << gs.str();
    if (N >= 4) {
      const CoefficientSystems s = coefficient_systems(N, o.digits);
      rep.check("coefficients reconstruct 2p" + at, s.f_matches_2p);
      rep.check("coefficients reconstruct 1" + at, s.b_is_one);
      rep.check("G c = (0,...,0,-1)" + at, s.c_residual_ok);
      std::ostringstream cs;
      write_coefficients_csv(cs, s);
      rep.open("coefficients_" + std::to_string(N) + ".csv") << cs.str();
    }
  }
  mt.write(rep, "moments");
  return {{"n", range_json(ns)}, {"digits", o.digits}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed points of random permutations versus Poisson(1): exact checks and simulations"};
  app.require_subcommand(1);
  Options o;
  const char* names[] = {"exact", "kernel", "project", "couple", "alt", "moments", "all"};
  const char* help[] = {"exact laws, distances, rate and separation",
                        "p function and kernel reversibility",
                        "cycle-type lumping and intertwining",
                        "monotone coupling simulation",
                        "Mallows-bit and ascent/peak couplings",
                        "moments, Gram matrix and coefficient systems",
                        "every subcommand with defaults"};
  std::map<std::string, CLI::App*> subs;
  for (int i = 0; i < 7; ++i) {
    CLI::App* s = app.add_subcommand(names[i], help[i]);
    s->add_option("--n,--n-range", o.n, "N or a..b");
    s->add_option("--seed", o.seed, "master seed");
    s->add_option("--replicas", o.replicas, "replicas / samples");
    s->add_option("--horizon", o.horizon, "coupling horizon n");
    s->add_option("--digits", o.digits, "decimal digits for enclosures");
    s->add_option("--jobs", o.jobs, "worker threads for replicas")->check(CLI::PositiveNumber);
    s->add_option("--out", o.out, "output directory");
    s->add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    if (std::string(names[i]) == "couple") s->add_option("--config", o.config, "JSON run config");
    subs[names[i]] = s;
  }
  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    auto run_one = [&](const std::string& name, const Options& opt, const fs::path& dir, const CLI::App* sub) {
      std::printf("== %s\n", name.c_str());
      Report rep(name, dir, opt.format);
      json cfg;
      if (name == "exact") cfg = cmd_exact(opt, rep);
      else if (name == "kernel") cfg = cmd_kernel(opt, rep);
      else if (name == "project") cfg = cmd_project(opt, rep);
      else if (name == "couple") cfg = cmd_couple(opt, rep, sub);
      else if (name == "alt") cfg = cmd_alt(opt, rep);
      else cfg = cmd_moments(opt, rep);
      cfg["format"] = opt.format;
      rep.finish(cfg, opt.seed, wall());
      return !rep.failed();
    };
    bool ok = true;
    if (cmd == "all") {
      for (const char* name : {"exact", "kernel", "project", "couple", "alt", "moments"}) {
        Options sub = o;
        sub.n.clear();
        ok = run_one(name, sub, fs::path(o.out) / name, nullptr) && ok;
      }
    } else {
      ok = run_one(cmd, o, o.out, subs[cmd]);
    }
    std::printf("%s (%.1f s)\n", ok ? "all verdicts pass" : "some verdicts FAIL", wall());
    return ok ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
