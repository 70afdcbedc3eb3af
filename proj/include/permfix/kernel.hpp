#pragma once

// Sparse exact-rational Markov kernels over an explicit ordered state list,
// plus the generic checks (detailed balance, Kolmogorov triangles,
// birth-and-death stationary law) shared by the kernel builders.

#include "permfix/exactdist.hpp"
#include "permfix/numeric.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace permfix {

struct MatrixEntry {
  std::size_t col;
  Rational value;
};

/// Sparse rational matrix; rows hold entries sorted by column, no zeros.
class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<MatrixEntry>& row(std::size_t i) const { return data_.at(i); }
  Rational at(std::size_t i, std::size_t j) const;
  /// Adds v to entry (i, j).
  void add(std::size_t i, std::size_t j, const Rational& v);

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::vector<MatrixEntry>> data_;
};

/// Row-stochastic kernel on an ordered list of integer states. Construction
/// rejects negative entries and rows that do not sum to exactly one.
class StochasticKernel {
 public:
  StochasticKernel(std::string label, std::vector<long> states, RationalMatrix entries);

  /// Builds a kernel from off-diagonal rates given as (from, to, value) state
  /// triples; each diagonal entry is one minus its row's off-diagonal mass.
  struct Move {
    long from;
    long to;
    Rational value;
  };
  static StochasticKernel from_moves(std::string label, std::vector<long> states, const std::vector<Move>& moves);

  const std::string& label() const { return label_; }
  const std::vector<long>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const RationalMatrix& matrix() const { return entries_; }

  bool has_state(long s) const;
  /// Throws std::out_of_range for a state not in the list.
  std::size_t index_of(long s) const;
  /// Entry by state labels; zero when either label is absent.
  Rational operator()(long from, long to) const;
  Rational at(std::size_t i, std::size_t j) const { return entries_.at(i, j); }

  /// Largest |i - j| over non-zero off-diagonal entries (index distance).
  std::size_t index_bandwidth() const;
  /// Largest |s_i - s_j| over non-zero off-diagonal entries (state distance).
  long state_bandwidth() const;

  nlohmann::json to_json() const;
  static StochasticKernel from_json(const nlohmann::json& j);

 private:
  std::string label_;
  std::vector<long> states_;
  RationalMatrix entries_;
  std::unordered_map<long, std::size_t> index_;
};

struct BalanceViolation {
  long from = 0;
  long to = 0;
  long via = 0;          ///< third state for triangle violations
  bool triangle = false;
  Rational residual;     ///< lhs - rhs
};

struct ReversibilityReport {
  bool detailed_balance = false;
  bool kolmogorov = false;
  std::optional<BalanceViolation> first_violation;

  bool pass() const { return detailed_balance && kolmogorov; }
  std::string describe() const;
};

/// Checks d(x)K(x,y) = d(y)K(y,x) for every pair and the cycle products on
/// every triangle of index-consecutive states. States of K must carry
/// positive mass under d (std::invalid_argument otherwise).
ReversibilityReport check_reversibility(const StochasticKernel& k, const ExactDist& d);

/// Exact stationary law of a birth-and-death kernel (tri-diagonal in state
/// index) by products of up/down ratios. Throws if some down-rate vanishes
/// where the matching up-rate does not.
ExactDist birth_death_stationary(const StochasticKernel& k, std::string label);

/// Checks d K = d exactly.
bool is_invariant(const StochasticKernel& k, const ExactDist& d);

}  // namespace permfix
