#include "permfix/moments.hpp"

#include "permfix/kernels.hpp"
#include "permfix/perm.hpp"

#include <ostream>
#include <stdexcept>

namespace permfix {

Integer falling(long x, unsigned k) {
  Integer r = 1;
  for (unsigned i = 0; i < k; ++i) r *= x - static_cast<long>(i);
  return r;
}

Rational falling_moment(unsigned N, unsigned k) {
  const ExactDist pi = fixed_point_pmf(N);
  Rational m = 0;
  for (std::size_t i = 0; i < pi.size(); ++i) m += pi.weights()[i] * Rational(falling(pi.support()[i], k));
  return m;
}

std::vector<Integer> bell_numbers(unsigned n) {
  std::vector<Integer> bell{1};
  std::vector<Integer> row{1};
  for (unsigned i = 1; i <= n; ++i) {
    std::vector<Integer> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    row = std::move(next);
    bell.push_back(row.front());
  }
  return bell;
}

RawMomentCheck raw_moment_equality(unsigned N, unsigned k) {
  const ExactDist pi = fixed_point_pmf(N);
  RawMomentCheck r;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    Integer p = 1;
    for (unsigned j = 0; j < k; ++j) p *= pi.support()[i];
    r.moment += pi.weights()[i] * Rational(p);
  }
  r.bell = bell_numbers(k)[k];
  r.equal = r.moment == Rational(r.bell);
  return r;
}

Rational eta2_fk(unsigned N, unsigned k) {
  if (k > N) throw std::invalid_argument("eta2_fk: k must be <= N");
  return k + 2 <= N ? Rational(1, 2) : Rational(0);
}

Rational eta2_fk_bruteforce(unsigned N, unsigned k) {
  if (k > N) throw std::invalid_argument("eta2_fk_bruteforce: k must be <= N");
  require_within_guard("eta2_fk_bruteforce", N, enumeration_guard(8));
  Integer sum = 0;
  for_each_permutation(static_cast<int>(N), [&](const Permutation& s) { sum += two_cycles(s) * falling(fixed_points(s), k); });
  return Rational(sum, factorial(N));
}

Integer fk_by_tuples(const std::vector<int>& sigma, unsigned k) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> tuple;
  std::vector<bool> used(sigma.size(), false);
  Integer count = 0;
  // Depth-first over ordered tuples of distinct points, all fixed.
  auto rec = [&](auto&& self) -> void {
    if (tuple.size() == k) {
      ++count;
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)] || sigma[static_cast<std::size_t>(i)] != i) continue;
      used[static_cast<std::size_t>(i)] = true;
      tuple.push_back(i);
      self(self);
      tuple.pop_back();
      used[static_cast<std::size_t>(i)] = false;
    }
  };
  rec(rec);
  return count;
}

bool GramMatrix::symmetric() const {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g[i][j] != g[j][i]) return false;
  return true;
}

GramMatrix gram(unsigned N) {
  if (N < 1) throw std::invalid_argument("gram: N must be >= 1");
  GramMatrix G;
  G.N = N;
  G.index = fixed_point_states(N);
  const std::size_t n = G.index.size();
  G.g.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const long k = G.index[i], l = G.index[j];
      Rational s = 0;
      for (long r = 0; r <= std::min(k, static_cast<long>(N) - l); ++r)
        s += Rational(binomial(l, k - r)) * inv_factorial(static_cast<unsigned>(r));
      G.g[i][j] = G.g[j][i] = Rational(factorial(static_cast<unsigned>(k))) * s;
    }
  return G;
}

GramMatrix gram_bruteforce(unsigned N) {
  require_within_guard("gram_bruteforce", N, enumeration_guard(8));
  GramMatrix G;
  G.N = N;
  G.index = fixed_point_states(N);
  const std::size_t n = G.index.size();
  std::vector<std::vector<Integer>> acc(n, std::vector<Integer>(n));
  for_each_permutation(static_cast<int>(N), [&](const Permutation& s) {
    const int f = fixed_points(s);
    std::vector<Integer> fk(n);
    for (std::size_t i = 0; i < n; ++i) fk[i] = falling(f, static_cast<unsigned>(G.index[i]));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc[i][j] += fk[i] * fk[j];
  });
  G.g.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) G.g[i][j] = Rational(acc[i][j], factorial(N));
  return G;
}

std::vector<Rational> solve_exact(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw std::invalid_argument("solve_exact: shape mismatch");
  // Clear denominators row by row into an integer augmented matrix.
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("solve_exact: matrix is not square");
    Integer l = boost::multiprecision::denominator(rhs[i]);
    for (const auto& v : a[i]) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(v));
    for (std::size_t j = 0; j < n; ++j) m[i][j] = boost::multiprecision::numerator(a[i][j] * Rational(l));
    m[i][n] = boost::multiprecision::numerator(rhs[i] * Rational(l));
  }
  // Bareiss elimination.
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) throw std::domain_error("solve_exact: singular matrix");
      std::swap(m[k], m[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  std::vector<Rational> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational s = Rational(m[ii][n]);
    for (std::size_t j = ii + 1; j < n; ++j) s -= Rational(m[ii][j]) * x[j];
    x[ii] = s / Rational(m[ii][ii]);
  }
  return x;
}

CoefficientSystems coefficient_systems(unsigned N, unsigned digits) {
  if (N < 4) throw std::invalid_argument("coefficient_systems: N must be >= 4");
  const GramMatrix G = gram(N);
  CoefficientSystems s;
  s.N = N;
  s.index = G.index;
  const std::size_t n = G.index.size();
  std::vector<Rational> rhs_a(n, Rational(1)), rhs_b(n, Rational(1));
  rhs_a.back() = 0;  // index N
  s.a = solve_exact(G.g, rhs_a);
  s.b = solve_exact(G.g, rhs_b);
  for (std::size_t i = 0; i < n; ++i) s.c.push_back(s.a[i] - s.b[i]);

  s.c_residual_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    Rational r = 0;
    for (std::size_t j = 0; j < n; ++j) r += G.g[i][j] * s.c[j];
    if (r != (i + 1 == n ? Rational(-1) : Rational(0))) s.c_residual_ok = false;
  }

  const PFunction p = p_closedform(N);
  s.f_matches_2p = s.b_is_one = true;
  for (long x : G.index) {
    Rational f = 0, one = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const Rational fk(falling(x, static_cast<unsigned>(G.index[k])));
      f += s.a[k] * fk;
      one += s.b[k] * fk;
    }
    s.f.push_back(f);
    s.one.push_back(one);
    if (f != 2 * p(x)) s.f_matches_2p = false;
    if (one != 1) s.b_is_one = false;
  }

  Rational sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long x = G.index[i];
    if (x > static_cast<long>(N) - 2) continue;
    Rational g = s.f[i] - 1;
    if (g < 0) g = -g;
    sum += g * inv_factorial(static_cast<unsigned>(x));
  }
  s.functional = einv_enclosure(digits) * sum;
  return s;
}

bool alternating_identity_holds(unsigned N) {
  const PFunction p = p_closedform(N);
  for (long x = 0; x <= static_cast<long>(N) - 2; ++x) {
    const auto m = static_cast<unsigned>(static_cast<long>(N) - x);
    Rational partial = 0;
    for (unsigned l = 0; l <= m; ++l) partial += (l % 2 ? Rational(-1) : Rational(1)) * inv_factorial(l);
    if (partial < Rational(1, 3) || partial > Rational(1, 2)) return false;
    Rational dev = 2 * p(x) - 1;
    if (dev < 0) dev = -dev;
    if (dev != Rational(static_cast<long>(m) - 1) / (Rational(factorial(m)) * partial)) return false;
  }
  return true;
}

void write_gram_csv(std::ostream& os, const GramMatrix& g) {
  os << "N,k,l,G_num,G_den\n";
  for (std::size_t i = 0; i < g.index.size(); ++i)
    for (std::size_t j = 0; j < g.index.size(); ++j)
      os << g.N << ',' << g.index[i] << ',' << g.index[j] << ',' << boost::multiprecision::numerator(g.g[i][j]) << ','
         << boost::multiprecision::denominator(g.g[i][j]) << '\n';
}

void write_coefficients_csv(std::ostream& os, const CoefficientSystems& s) {
  os << "N,k,a,b,c,f_at_k\n";
  for (std::size_t i = 0; i < s.index.size(); ++i)
    os << s.N << ',' << s.index[i] << ',' << to_string(s.a[i]) << ',' << to_string(s.b[i]) << ',' << to_string(s.c[i])
       << ',' << to_string(s.f[i]) << '\n';
  os << "# functional_lo," << to_decimal(s.functional.lo, 20) << ",functional_hi," << to_decimal(s.functional.hi, 20)
     << '\n';
}

}  // namespace permfix
