#include "permfix/kernel.hpp"

#include "permfix/json_io.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <sstream>
#include <stdexcept>

namespace permfix {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

Rational RationalMatrix::at(std::size_t i, std::size_t j) const {
  const auto& r = data_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const MatrixEntry& e, std::size_t c) { return e.col < c; });
  if (it == r.end() || it->col != j) return 0;
  return it->value;
}

void RationalMatrix::add(std::size_t i, std::size_t j, const Rational& v) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("RationalMatrix::add: index out of range");
  if (v == 0) return;
  auto& r = data_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const MatrixEntry& e, std::size_t c) { return e.col < c; });
  if (it != r.end() && it->col == j) {
    it->value += v;
    if (it->value == 0) r.erase(it);
  } else {
    r.insert(it, MatrixEntry{j, v});
  }
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("RationalMatrix: shape mismatch in product");
  RationalMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::map<std::size_t, Rational> acc;
    for (const auto& e : a.data_[i])
      for (const auto& f : b.data_[e.col]) acc[f.col] += e.value * f.value;
    for (auto& [c, v] : acc)
      if (v != 0) out.data_[i].push_back(MatrixEntry{c, std::move(v)});
  }
  return out;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    const auto& x = a.data_[i];
    const auto& y = b.data_[i];
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k].col != y[k].col || x[k].value != y[k].value) return false;
  }
  return true;
}

StochasticKernel::StochasticKernel(std::string label, std::vector<long> states, RationalMatrix entries)
    : label_(std::move(label)), states_(std::move(states)), entries_(std::move(entries)) {
  if (entries_.rows() != states_.size() || entries_.cols() != states_.size())
    throw std::invalid_argument("StochasticKernel '" + label_ + "': matrix shape does not match state list");
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!index_.emplace(states_[i], i).second) throw std::invalid_argument("StochasticKernel: duplicate state");
    Rational sum = 0;
    for (const auto& e : entries_.row(i)) {
      if (e.value < 0)
        throw std::invalid_argument("StochasticKernel '" + label_ + "': negative entry in row of state " +
                                    std::to_string(states_[i]));
      sum += e.value;
    }
    if (sum != 1)
      throw std::invalid_argument("StochasticKernel '" + label_ + "': row of state " + std::to_string(states_[i]) +
                                  " sums to " + sum.str());
  }
}

StochasticKernel StochasticKernel::from_moves(std::string label, std::vector<long> states,
                                              const std::vector<Move>& moves) {
  RationalMatrix m(states.size(), states.size());
  std::unordered_map<long, std::size_t> pos;
  for (std::size_t i = 0; i < states.size(); ++i) pos.emplace(states[i], i);
  auto idx = [&](long s) {
    auto it = pos.find(s);
    if (it == pos.end())
      throw std::out_of_range("StochasticKernel::from_moves: state " + std::to_string(s) + " not in state list");
    return it->second;
  };
  std::vector<Rational> off(states.size());
  for (const auto& mv : moves) {
    if (mv.from == mv.to) throw std::invalid_argument("StochasticKernel::from_moves: diagonal move given");
    if (mv.value < 0) throw std::invalid_argument("StochasticKernel::from_moves: negative rate");
    const std::size_t i = idx(mv.from);
    m.add(i, idx(mv.to), mv.value);
    off[i] += mv.value;
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Rational diag = 1 - off[i];
    if (diag < 0)
      throw std::invalid_argument("StochasticKernel::from_moves: off-diagonal mass exceeds 1 at state " +
                                  std::to_string(states[i]));
    m.add(i, i, diag);
  }
  return StochasticKernel(std::move(label), std::move(states), std::move(m));
}

bool StochasticKernel::has_state(long s) const { return index_.count(s) != 0; }

std::size_t StochasticKernel::index_of(long s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw std::out_of_range("state " + std::to_string(s) + " not in kernel '" + label_ + "'");
  return it->second;
}

Rational StochasticKernel::operator()(long from, long to) const {
  if (!has_state(from) || !has_state(to)) return 0;
  return entries_.at(index_of(from), index_of(to));
}

std::size_t StochasticKernel::index_bandwidth() const {
  std::size_t bw = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (const auto& e : entries_.row(i)) bw = std::max(bw, e.col > i ? e.col - i : i - e.col);
  return bw;
}

long StochasticKernel::state_bandwidth() const {
  long bw = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (const auto& e : entries_.row(i)) bw = std::max(bw, std::labs(states_[e.col] - states_[i]));
  return bw;
}

nlohmann::json StochasticKernel::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& e : entries_.row(i))
      cols.push_back({{"to", states_[e.col]},
                      {"num", integer_to_json(boost::multiprecision::numerator(e.value))},
                      {"den", integer_to_json(boost::multiprecision::denominator(e.value))}});
    rows.push_back({{"from", states_[i]}, {"cols", cols}});
  }
  return {{"label", label_}, {"states", states_}, {"rows", rows}};
}

StochasticKernel StochasticKernel::from_json(const nlohmann::json& j) {
  std::vector<long> states = j.at("states").get<std::vector<long>>();
  auto idx = [&](long s) {
    auto it = std::find(states.begin(), states.end(), s);
    if (it == states.end()) throw std::invalid_argument("kernel JSON: unknown state " + std::to_string(s));
    return static_cast<std::size_t>(it - states.begin());
  };
  RationalMatrix m(states.size(), states.size());
  for (const auto& row : j.at("rows")) {
    const std::size_t i = idx(row.at("from").get<long>());
    for (const auto& c : row.at("cols"))
      m.add(i, idx(c.at("to").get<long>()), Rational(integer_from_json(c.at("num")), integer_from_json(c.at("den"))));
  }
  return StochasticKernel(j.at("label").get<std::string>(), std::move(states), std::move(m));
}

std::string ReversibilityReport::describe() const {
  std::ostringstream os;
  os << "detailed_balance=" << (detailed_balance ? "pass" : "fail") << " kolmogorov=" << (kolmogorov ? "pass" : "fail");
  if (first_violation) {
    const auto& v = *first_violation;
    os << " first_violation=" << (v.triangle ? "triangle(" : "pair(") << v.from << "," << v.to;
    if (v.triangle) os << "," << v.via;
    os << ") residual=" << v.residual.str();
  }
  return os.str();
}

ReversibilityReport check_reversibility(const StochasticKernel& k, const ExactDist& d) {
  const auto& st = k.states();
  std::vector<Rational> w(st.size());
  for (std::size_t i = 0; i < st.size(); ++i) {
    w[i] = d(st[i]);
    if (w[i] <= 0)
      throw std::invalid_argument("check_reversibility: state " + std::to_string(st[i]) + " has zero mass under " +
                                  d.label());
  }
  ReversibilityReport rep;
  rep.detailed_balance = true;
  rep.kolmogorov = true;
  for (std::size_t i = 0; i < st.size() && rep.detailed_balance; ++i) {
    for (const auto& e : k.matrix().row(i)) {
      const Rational lhs = w[i] * e.value;
      const Rational rhs = w[e.col] * k.at(e.col, i);
      if (lhs != rhs) {
        rep.detailed_balance = false;
        rep.first_violation = BalanceViolation{st[i], st[e.col], 0, false, lhs - rhs};
        break;
      }
    }
  }
  for (std::size_t i = 0; i + 2 < st.size(); ++i) {
    const std::size_t a = i, b = i + 1, c = i + 2;
    const Rational fwd = k.at(a, b) * k.at(b, c) * k.at(c, a);
    const Rational bwd = k.at(a, c) * k.at(c, b) * k.at(b, a);
    if (fwd != bwd) {
      rep.kolmogorov = false;
      if (!rep.first_violation) rep.first_violation = BalanceViolation{st[a], st[b], st[c], true, fwd - bwd};
      break;
    }
  }
  return rep;
}

ExactDist birth_death_stationary(const StochasticKernel& k, std::string label) {
  if (k.index_bandwidth() > 1) throw std::invalid_argument("birth_death_stationary: kernel is not tri-diagonal");
  std::vector<Rational> w(k.size());
  w[0] = 1;
  Rational total = 1;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const Rational up = k.at(i, i + 1);
    const Rational down = k.at(i + 1, i);
    if (down == 0) {
      if (up != 0) throw std::domain_error("birth_death_stationary: one-way edge");
      throw std::domain_error("birth_death_stationary: reducible chain");
    }
    w[i + 1] = w[i] * up / down;
    total += w[i + 1];
  }
  for (auto& v : w) v /= total;
  return ExactDist(std::move(label), k.states(), std::move(w));
}

bool is_invariant(const StochasticKernel& k, const ExactDist& d) {
  std::vector<Rational> out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Rational wi = d(k.states()[i]);
    for (const auto& e : k.matrix().row(i)) out[e.col] += wi * e.value;
  }
  for (std::size_t j = 0; j < k.size(); ++j)
    if (out[j] != d(k.states()[j])) return false;
  return true;
}

}  // namespace permfix
