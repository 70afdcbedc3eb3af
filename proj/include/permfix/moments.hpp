#pragma once

// Moments of the fixed-point count: falling-factorial and raw moments, the
// functionals F_k (ordered k-tuples of fixed points), their Gram matrix on
// V = {0..N-2} u {N}, and the linear systems that recover 2p from it.

#include "permfix/exactdist.hpp"

#include <iosfwd>
#include <vector>

namespace permfix {

/// x(x-1)...(x-k+1).
Integer falling(long x, unsigned k);

/// E_pi[F_k] from the exact fixed-point law.
Rational falling_moment(unsigned N, unsigned k);

/// Bell numbers B_0..B_n by the Bell triangle.
std::vector<Integer> bell_numbers(unsigned n);

struct RawMomentCheck {
  Rational moment;  ///< E_pi[eta_1^k]
  Integer bell;     ///< B_k
  bool equal = false;
};

RawMomentCheck raw_moment_equality(unsigned N, unsigned k);

/// 1/2 for k <= N-2, 0 for k in {N-1, N}.
Rational eta2_fk(unsigned N, unsigned k);
/// Same expectation summed over S_N (guard 8).
Rational eta2_fk_bruteforce(unsigned N, unsigned k);

/// F_k(sigma) by summing over ordered k-tuples of distinct points.
Integer fk_by_tuples(const std::vector<int>& sigma, unsigned k);

struct GramMatrix {
  unsigned N = 0;
  std::vector<long> index;                 ///< V; row/column labels
  std::vector<std::vector<Rational>> g;

  bool symmetric() const;
  friend bool operator==(const GramMatrix& a, const GramMatrix& b) { return a.N == b.N && a.g == b.g; }
};

/// G_{k,l} = k! sum_{r=0}^{min(k, N-l)} C(l, k-r)/r! for k <= l, symmetric.
GramMatrix gram(unsigned N);
/// E_nu[F_k F_l] over S_N (guard 8).
GramMatrix gram_bruteforce(unsigned N);

/// Solves A x = rhs exactly by fraction-free elimination on the integer
/// matrix obtained after clearing denominators. Throws std::domain_error if
/// A is singular.
std::vector<Rational> solve_exact(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& rhs);

struct CoefficientSystems {
  unsigned N = 0;
  std::vector<long> index;   ///< V
  std::vector<Rational> a;   ///< G a = (1,...,1,0)
  std::vector<Rational> b;   ///< G b = (1,...,1)
  std::vector<Rational> c;   ///< a - b, so G c = (0,...,0,-1)
  std::vector<Rational> f;   ///< sum_k a_k F_k evaluated on V
  std::vector<Rational> one; ///< sum_k b_k F_k evaluated on V
  bool f_matches_2p = false;
  bool b_is_one = false;
  bool c_residual_ok = false;
  Interval functional;       ///< sum_{x<=N-2} |f(x) - 1| / (e x!)
};

CoefficientSystems coefficient_systems(unsigned N, unsigned digits = 50);

/// |2p(x)-1| = (N-x-1)/((N-x)! sum_{l<=N-x} (-1)^l/l!) with the partial
/// sum in [1/3, 1/2], checked exactly on x in {0..N-2}.
bool alternating_identity_holds(unsigned N);

void write_gram_csv(std::ostream& os, const GramMatrix& g);
void write_coefficients_csv(std::ostream& os, const CoefficientSystems& s);

}  // namespace permfix
