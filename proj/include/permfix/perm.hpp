#pragma once

// Permutations of {0..N-1} as arrays of images, cycle types, conjugacy
// class sizes and full enumeration of the symmetric group.

#include "permfix/numeric.hpp"

#include <algorithm>
#include <compare>
#include <numeric>
#include <string>
#include <vector>

namespace permfix {

using Permutation = std::vector<int>;

/// Cycle-length multiplicities (eta_1, ..., eta_N) with sum_l l*eta_l = N.
class CycleType {
 public:
  CycleType() = default;
  explicit CycleType(std::vector<int> counts);

  int n() const { return static_cast<int>(counts_.size()); }
  /// eta_l for l >= 1; zero for l > N.
  int eta(int l) const { return l >= 1 && l <= n() ? counts_[static_cast<std::size_t>(l - 1)] : 0; }
  const std::vector<int>& counts() const { return counts_; }
  /// Cycle lengths in non-increasing order.
  std::vector<int> lengths() const;
  static CycleType from_lengths(int N, const std::vector<int>& lengths);

  std::string to_string() const;  ///< "(eta_1,...,eta_N)"

  friend auto operator<=>(const CycleType&, const CycleType&) = default;

 private:
  std::vector<int> counts_;
};

CycleType cycle_type(const Permutation& s);
int fixed_points(const Permutation& s);
int two_cycles(const Permutation& s);

/// N!/prod_l (l^{eta_l} eta_l!).
Integer class_size(const CycleType& c);

/// All cycle types of N points, sorted.
std::vector<CycleType> all_cycle_types(int N);

/// Calls f(perm) for every permutation of {0..N-1} in lexicographic order.
template <class F>
void for_each_permutation(int N, F&& f) {
  Permutation s(static_cast<std::size_t>(N));
  std::iota(s.begin(), s.end(), 0);
  do {
    f(static_cast<const Permutation&>(s));
  } while (std::next_permutation(s.begin(), s.end()));
}

/// Lexicographic rank of a permutation among all N! (Lehmer code).
std::size_t permutation_rank(const Permutation& s);

/// Enumeration guard: returns PERMFIX_GUARD_N when set, else the default.
unsigned enumeration_guard(unsigned default_guard);

/// Throws std::out_of_range when N exceeds the guard.
void require_within_guard(const char* what, unsigned N, unsigned guard);

}  // namespace permfix
