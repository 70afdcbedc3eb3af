#pragma once

// The fixed-point kernels: the conditional mean p(x) = E[eta_2 | eta_1 = x]
// by three independent routes, the penta-diagonal kernel P on
// V = {0..N-2} u {N}, and the birth-and-death kernels extracted from it.

#include "permfix/exactdist.hpp"
#include "permfix/kernel.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace permfix {

/// V = {0, ..., N-2} u {N}, in increasing order.
std::vector<long> fixed_point_states(unsigned N);

enum class PSource { bruteforce, closedform, recursion, constant };

const char* to_string(PSource s);

/// Map x in V -> p(x). Evaluating outside V throws std::out_of_range.
class PFunction {
 public:
  PFunction(unsigned N, PSource source, std::vector<Rational> values_on_v);

  unsigned n() const { return n_; }
  PSource source() const { return source_; }
  const std::vector<long>& states() const { return states_; }
  const std::vector<Rational>& values() const { return values_; }
  Rational operator()(long x) const;

  friend bool operator==(const PFunction& a, const PFunction& b) {
    return a.n_ == b.n_ && a.values_ == b.values_;
  }

 private:
  unsigned n_;
  PSource source_;
  std::vector<long> states_;
  std::vector<Rational> values_;
};

/// Exact E[eta_2 | eta_1 = x] over all N! permutations. Refuses N above the
/// enumeration guard (default 8).
PFunction p_bruteforce(unsigned N);
PFunction p_bruteforce(unsigned N, unsigned guard);

/// p(x) = 1/2 (D_{N-x-2}/(N-x-2)!) ((N-x)!/D_{N-x}) for x <= N-2, p(N) = 0.
PFunction p_closedform(unsigned N);

/// Downward iteration k(x) = F_x(k(x+1)) from k(N-3) = 0, p = k/2.
PFunction p_recursion(unsigned N);

/// F_x(r) = (N-x)(N-x-1-r)/((N-x-1)^2 - r).
Rational recursion_map(unsigned N, long x, const Rational& r);

/// Penta-diagonal kernel with P(x,x-1) = x(N-x)/(N(N-1)),
/// P(x,x-2) = x(x-1)/(N(N-1)), P(x,x+1) = (N-x-2p(x))/(N(N-1)),
/// P(x,x+2) = 2p(x)/(N(N-1)). Rates pointing outside V must vanish.
StochasticKernel build_penta(unsigned N, const PFunction& p);

/// The exact eta_1-projection of the transposition walk: the same moves as
/// build_penta with the +-1 rates doubled, 2x(N-x) and 2(N-x-2p(x)) over
/// N(N-1). The +-2 rates coincide.
StochasticKernel build_penta_projected(unsigned N, const PFunction& p);

/// P with all jumps of size two removed except N-2 <-> N.
StochasticKernel build_tilde(unsigned N, const PFunction& p);

/// Order of V under which only jumps of size two (and 0 <-> 1) are kept:
/// N-3, N-5, ..., 1, 0, 2, ..., N-2, N for even N and
/// N-3, N-5, ..., 0, 1, 3, ..., N-2, N for odd N. Entry i is z_i.
std::vector<long> hat_ordering(unsigned N);

/// Birth-and-death kernel on {0..N-1} with P_hat(i,i+-1) = P(z_i, z_{i+-1}).
StochasticKernel build_hat(unsigned N, const PFunction& p);
StochasticKernel build_hat(unsigned N);

/// pi_hat(i) = pi(z_i).
ExactDist hat_stationary(unsigned N);

/// Birth-and-death kernels on {0..N-4}: the restriction of P_tilde (up-rate
/// N-x-2p(x)), R (up-rate N-x-1) and R_tilde (up-rate N-x-1/2), all with
/// down-rate x(N-x) over N(N-1). The up move out of N-4 is removed.
struct RestrictedKernels {
  StochasticKernel check;
  StochasticKernel r;
  StochasticKernel r_tilde;
};

RestrictedKernels build_restricted(unsigned N, const PFunction& p);
RestrictedKernels build_restricted(unsigned N);

/// Birth-and-death kernel on {0..N-4} with up-rate (N - x - up_offset),
/// down-rate x(N-x), both over N(N-1).
StochasticKernel restricted_birth_death(unsigned N, const Rational& up_offset, std::string label);

/// pi conditioned on {0..N-4}.
ExactDist pi_check(unsigned N);
/// Poisson(1) conditioned on {0..N-4}.
ExactDist zeta(unsigned N);

/// The penta-diagonal form on {0..N} with p replaced by 1/2 (p(N) = 0; the
/// jump N-1 -> N+1 is dropped). Reversible for Poisson(1) restricted to {0..N}.
StochasticKernel poisson_reversible_kernel(unsigned N);

/// CSV rows x, p(x), |2p(x)-1|, 1/(N-x-2)!, 3(N-x-1)/(N-x)! and the two
/// margins, for x in {0..N-2}.
void write_p_csv(std::ostream& os, const PFunction& p);

struct PBoundsReport {
  bool factorial_bound = true;        ///< |2p(x)-1| <= 1/(N-x-2)!
  bool linear_bound = true;      ///< |2p(x)-1| <= 3(N-x-1)/(N-x)!
  bool quarter = true;       ///< 1/4 <= p(x) <= 3/4 on {0..N-4}
  bool alternation = true;   ///< sign of 2p(N-2-x)-1 is (-1)^x
  long first_failure = -1;
};

PBoundsReport check_p_bounds(const PFunction& p);

}  // namespace permfix
