#include "permfix/kernels.hpp"

#include "permfix/perm.hpp"

#include <ostream>
#include <stdexcept>

namespace permfix {

std::vector<long> fixed_point_states(unsigned N) {
  std::vector<long> v;
  for (long x = 0; x + 2 <= static_cast<long>(N); ++x) v.push_back(x);
  v.push_back(N);
  return v;
}

const char* to_string(PSource s) {
  switch (s) {
    case PSource::bruteforce: return "bruteforce";
    case PSource::closedform: return "closedform";
    case PSource::recursion: return "recursion";
    case PSource::constant: return "constant";
  }
  return "?";
}

PFunction::PFunction(unsigned N, PSource source, std::vector<Rational> values_on_v)
    : n_(N), source_(source), states_(fixed_point_states(N)), values_(std::move(values_on_v)) {
  if (values_.size() != states_.size()) throw std::invalid_argument("PFunction: one value per state of V expected");
  for (const auto& v : values_)
    if (v < 0) throw std::invalid_argument("PFunction: negative value");
}

Rational PFunction::operator()(long x) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == x) return values_[i];
  throw std::out_of_range("PFunction: x=" + std::to_string(x) + " not in V for N=" + std::to_string(n_));
}

PFunction p_bruteforce(unsigned N) { return p_bruteforce(N, enumeration_guard(8)); }

PFunction p_bruteforce(unsigned N, unsigned guard) {
  if (N < 1) throw std::invalid_argument("p_bruteforce: N must be >= 1");
  require_within_guard("p_bruteforce", N, guard);
  std::vector<long> count(N + 1, 0), eta2_sum(N + 1, 0);
  for_each_permutation(static_cast<int>(N), [&](const Permutation& s) {
    const int f = fixed_points(s);
    ++count[static_cast<std::size_t>(f)];
    eta2_sum[static_cast<std::size_t>(f)] += two_cycles(s);
  });
  std::vector<Rational> vals;
  for (long x : fixed_point_states(N)) {
    const auto i = static_cast<std::size_t>(x);
    if (count[i] == 0) throw std::logic_error("p_bruteforce: state of V never observed");
    vals.emplace_back(Integer(eta2_sum[i]), Integer(count[i]));
  }
  return PFunction(N, PSource::bruteforce, std::move(vals));
}

PFunction p_closedform(unsigned N) {
  if (N < 1) throw std::invalid_argument("p_closedform: N must be >= 1");
  const DerangementTable d = derangements(N);
  std::vector<Rational> vals;
  for (long x : fixed_point_states(N)) {
    if (x == static_cast<long>(N)) {
      vals.emplace_back(0);
      continue;
    }
    const auto m = static_cast<unsigned>(N - x);  // >= 2
    vals.push_back(Rational(1, 2) * Rational(d[m - 2], factorial(m - 2)) * Rational(factorial(m), d[m]));
  }
  return PFunction(N, PSource::closedform, std::move(vals));
}

Rational recursion_map(unsigned N, long x, const Rational& r) {
  const Rational a = static_cast<long>(N) - x;
  const Rational den = (a - 1) * (a - 1) - r;
  if (den == 0) throw std::domain_error("recursion_map: pole at r = (N-x-1)^2");
  return a * (a - 1 - r) / den;
}

PFunction p_recursion(unsigned N) {
  if (N < 4) throw std::invalid_argument("p_recursion: N must be >= 4");
  // k indexed by x in 0..N-2.
  std::vector<Rational> k(N - 1);
  k[N - 2] = 2;
  k[N - 3] = 0;
  for (long x = static_cast<long>(N) - 4; x >= 0; --x)
    k[static_cast<std::size_t>(x)] = recursion_map(N, x, k[static_cast<std::size_t>(x) + 1]);
  std::vector<Rational> vals;
  for (const auto& v : k) vals.push_back(v / 2);
  vals.emplace_back(0);  // p(N)
  return PFunction(N, PSource::recursion, std::move(vals));
}

namespace {

Rational nn1(unsigned N) { return Rational(static_cast<long>(N) * (static_cast<long>(N) - 1)); }

void push_move(std::vector<StochasticKernel::Move>& moves, const std::vector<long>& states, long from, long to,
               const Rational& rate, const char* what) {
  if (rate < 0)
    throw std::invalid_argument(std::string(what) + ": negative rate from " + std::to_string(from) + " to " +
                                std::to_string(to));
  if (rate == 0) return;
  if (std::find(states.begin(), states.end(), to) == states.end())
    throw std::logic_error(std::string(what) + ": positive rate from " + std::to_string(from) +
                           " leaves the state space towards " + std::to_string(to));
  moves.push_back({from, to, rate});
}

}  // namespace

StochasticKernel build_penta(unsigned N, const PFunction& p) {
  if (N < 2) throw std::invalid_argument("build_penta: N must be >= 2");
  if (p.n() != N) throw std::invalid_argument("build_penta: PFunction built for another N");
  const auto states = fixed_point_states(N);
  const Rational d = nn1(N);
  const long n = N;
  std::vector<StochasticKernel::Move> moves;
  for (long x : states) {
    const Rational px = p(x);
    push_move(moves, states, x, x - 1, Rational(x * (n - x)) / d, "build_penta");
    push_move(moves, states, x, x - 2, Rational(x * (x - 1)) / d, "build_penta");
    push_move(moves, states, x, x + 1, (n - x - 2 * px) / d, "build_penta");
    push_move(moves, states, x, x + 2, 2 * px / d, "build_penta");
  }
  return StochasticKernel::from_moves("P_" + std::to_string(N), states, moves);
}

StochasticKernel build_penta_projected(unsigned N, const PFunction& p) {
  if (N < 2) throw std::invalid_argument("build_penta_projected: N must be >= 2");
  if (p.n() != N) throw std::invalid_argument("build_penta_projected: PFunction built for another N");
  const auto states = fixed_point_states(N);
  const Rational d = nn1(N);
  const long n = N;
  std::vector<StochasticKernel::Move> moves;
  for (long x : states) {
    const Rational px = p(x);
    push_move(moves, states, x, x - 1, Rational(2 * x * (n - x)) / d, "build_penta_projected");
    push_move(moves, states, x, x - 2, Rational(x * (x - 1)) / d, "build_penta_projected");
    push_move(moves, states, x, x + 1, 2 * (n - x - 2 * px) / d, "build_penta_projected");
    push_move(moves, states, x, x + 2, 2 * px / d, "build_penta_projected");
  }
  return StochasticKernel::from_moves("Pproj_" + std::to_string(N), states, moves);
}

StochasticKernel build_tilde(unsigned N, const PFunction& p) {
  if (N < 2) throw std::invalid_argument("build_tilde: N must be >= 2");
  if (p.n() != N) throw std::invalid_argument("build_tilde: PFunction built for another N");
  const auto states = fixed_point_states(N);
  const Rational d = nn1(N);
  const long n = N;
  std::vector<StochasticKernel::Move> moves;
  for (long x : states) {
    if (x != n) push_move(moves, states, x, x - 1, Rational(x * (n - x)) / d, "build_tilde");
    if (x != n - 2 && x != n) push_move(moves, states, x, x + 1, (n - x - 2 * p(x)) / d, "build_tilde");
    if (x == n - 2) push_move(moves, states, x, n, Rational(2) / d, "build_tilde");
    if (x == n) push_move(moves, states, x, n - 2, Rational(1), "build_tilde");
  }
  return StochasticKernel::from_moves("Ptilde_" + std::to_string(N), states, moves);
}

std::vector<long> hat_ordering(unsigned N) {
  if (N < 2) throw std::invalid_argument("hat_ordering: N must be >= 2");
  const long n = N;
  std::vector<long> z;
  // Descending run of the parity of N-3, then the ascending run of the other
  // parity up to N-2, then N.
  for (long v = n - 3; v >= 0; v -= 2) z.push_back(v);
  for (long v = (n - 3 >= 0 && (n - 3) % 2 == 0) ? 1 : 0; v <= n - 2; v += 2) z.push_back(v);
  z.push_back(n);
  return z;
}

StochasticKernel build_hat(unsigned N, const PFunction& p) {
  const StochasticKernel P = build_penta(N, p);
  const auto z = hat_ordering(N);
  std::vector<long> idx(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) idx[i] = static_cast<long>(i);
  std::vector<StochasticKernel::Move> moves;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const Rational up = P(z[i], z[i + 1]);
    const Rational down = P(z[i + 1], z[i]);
    if (up != 0) moves.push_back({static_cast<long>(i), static_cast<long>(i + 1), up});
    if (down != 0) moves.push_back({static_cast<long>(i + 1), static_cast<long>(i), down});
  }
  return StochasticKernel::from_moves("Phat_" + std::to_string(N), idx, moves);
}

StochasticKernel build_hat(unsigned N) { return build_hat(N, N >= 4 ? p_recursion(N) : p_closedform(N)); }

ExactDist hat_stationary(unsigned N) {
  const ExactDist pi = fixed_point_pmf(N);
  const auto z = hat_ordering(N);
  std::vector<long> s;
  std::vector<Rational> w;
  for (std::size_t i = 0; i < z.size(); ++i) {
    s.push_back(static_cast<long>(i));
    w.push_back(pi(z[i]));
  }
  return ExactDist("pihat_" + std::to_string(N), std::move(s), std::move(w));
}

namespace {

StochasticKernel restricted_with_up(unsigned N, const std::vector<Rational>& up_rate, std::string label) {
  const long top = static_cast<long>(N) - 4;
  const Rational d = nn1(N);
  const long n = N;
  std::vector<long> states;
  for (long x = 0; x <= top; ++x) states.push_back(x);
  std::vector<StochasticKernel::Move> moves;
  for (long x = 0; x <= top; ++x) {
    if (x > 0) push_move(moves, states, x, x - 1, Rational(x * (n - x)) / d, "restricted kernel");
    if (x < top) push_move(moves, states, x, x + 1, up_rate[static_cast<std::size_t>(x)] / d, "restricted kernel");
  }
  return StochasticKernel::from_moves(std::move(label), std::move(states), moves);
}

}  // namespace

StochasticKernel restricted_birth_death(unsigned N, const Rational& up_offset, std::string label) {
  if (N < 5) throw std::invalid_argument("restricted kernels need N >= 5");
  std::vector<Rational> up;
  for (long x = 0; x <= static_cast<long>(N) - 4; ++x) up.push_back(static_cast<long>(N) - x - up_offset);
  return restricted_with_up(N, up, std::move(label));
}

RestrictedKernels build_restricted(unsigned N, const PFunction& p) {
  if (N < 5) throw std::invalid_argument("build_restricted: N must be >= 5");
  std::vector<Rational> up;
  for (long x = 0; x <= static_cast<long>(N) - 4; ++x) up.push_back(static_cast<long>(N) - x - 2 * p(x));
  const std::string n = std::to_string(N);
  return {restricted_with_up(N, up, "Pcheck_" + n), restricted_birth_death(N, Rational(1), "R_" + n),
          restricted_birth_death(N, Rational(1, 2), "Rtilde_" + n)};
}

RestrictedKernels build_restricted(unsigned N) { return build_restricted(N, p_recursion(N)); }

ExactDist pi_check(unsigned N) {
  if (N < 4) throw std::invalid_argument("pi_check: N must be >= 4");
  return fixed_point_pmf(N).conditioned(static_cast<long>(N) - 4, "picheck_" + std::to_string(N));
}

ExactDist zeta(unsigned N) {
  if (N < 4) throw std::invalid_argument("zeta: N must be >= 4");
  return poisson_conditioned(N - 4);
}

StochasticKernel poisson_reversible_kernel(unsigned N) {
  if (N < 2) throw std::invalid_argument("poisson_reversible_kernel: N must be >= 2");
  const long n = N;
  const Rational d = nn1(N);
  std::vector<long> states;
  for (long x = 0; x <= n; ++x) states.push_back(x);
  std::vector<StochasticKernel::Move> moves;
  for (long x = 0; x <= n; ++x) {
    const Rational pbar = x == n ? Rational(0) : Rational(1, 2);
    push_move(moves, states, x, x - 1, Rational(x * (n - x)) / d, "poisson_reversible_kernel");
    push_move(moves, states, x, x - 2, Rational(x * (x - 1)) / d, "poisson_reversible_kernel");
    push_move(moves, states, x, x + 1, (n - x - 2 * pbar) / d, "poisson_reversible_kernel");
    if (x + 2 <= n) push_move(moves, states, x, x + 2, 2 * pbar / d, "poisson_reversible_kernel");
  }
  return StochasticKernel::from_moves("Pbar_" + std::to_string(N), states, moves);
}

void write_p_csv(std::ostream& os, const PFunction& p) {
  const long n = p.n();
  os << "N,x,p_num,p_den,p,abs_2p_minus_1,factorial_bound,factorial_margin,linear_bound,linear_margin\n";
  for (long x = 0; x <= n - 2; ++x) {
    const Rational v = p(x);
    Rational dev = 2 * v - 1;
    if (dev < 0) dev = -dev;
    const Rational b41(Integer(1), factorial(static_cast<unsigned>(n - x - 2)));
    const Rational bB1(Integer(3 * (n - x - 1)), factorial(static_cast<unsigned>(n - x)));
    os << n << ',' << x << ',' << boost::multiprecision::numerator(v) << ',' << boost::multiprecision::denominator(v)
       << ',' << to_decimal(v, 17) << ',' << to_decimal(dev, 17) << ',' << to_decimal(b41, 17) << ','
       << to_decimal(Rational(b41 - dev), 17) << ',' << to_decimal(bB1, 17) << ','
       << to_decimal(Rational(bB1 - dev), 17) << '\n';
  }
}

PBoundsReport check_p_bounds(const PFunction& p) {
  PBoundsReport r;
  const long n = p.n();
  auto fail = [&](bool& flag, long x) {
    flag = false;
    if (r.first_failure < 0) r.first_failure = x;
  };
  for (long x = 0; x <= n - 2; ++x) {
    const Rational dev2 = 2 * p(x) - 1;
    const Rational dev = dev2 < 0 ? Rational(-dev2) : dev2;
    if (dev > Rational(Integer(1), factorial(static_cast<unsigned>(n - x - 2)))) fail(r.factorial_bound, x);
    if (dev > Rational(Integer(3 * (n - x - 1)), factorial(static_cast<unsigned>(n - x)))) fail(r.linear_bound, x);
    if (x <= n - 4 && (p(x) < Rational(1, 4) || p(x) > Rational(3, 4))) fail(r.quarter, x);
    const long j = n - 2 - x;  // 2p(N-2-j)-1 has sign (-1)^j
    const bool positive = dev2 > 0;
    if (dev2 == 0 || positive != (j % 2 == 0)) fail(r.alternation, x);
  }
  return r;
}

}  // namespace permfix
