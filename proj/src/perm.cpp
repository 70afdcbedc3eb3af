#include "permfix/perm.hpp"

#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace permfix {

CycleType::CycleType(std::vector<int> counts) : counts_(std::move(counts)) {
  long total = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0) throw std::invalid_argument("CycleType: negative multiplicity");
    total += static_cast<long>(i + 1) * counts_[i];
  }
  if (total != static_cast<long>(counts_.size()))
    throw std::invalid_argument("CycleType: sum of l*eta_l differs from N");
}

std::vector<int> CycleType::lengths() const {
  std::vector<int> out;
  for (int l = n(); l >= 1; --l)
    for (int k = 0; k < eta(l); ++k) out.push_back(l);
  return out;
}

CycleType CycleType::from_lengths(int N, const std::vector<int>& lengths) {
  std::vector<int> c(static_cast<std::size_t>(N), 0);
  for (int l : lengths) {
    if (l < 1 || l > N) throw std::invalid_argument("CycleType::from_lengths: bad cycle length");
    ++c[static_cast<std::size_t>(l - 1)];
  }
  return CycleType(std::move(c));
}

std::string CycleType::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(counts_[i]);
  }
  return s + ")";
}

CycleType cycle_type(const Permutation& s) {
  const std::size_t n = s.size();
  std::vector<int> counts(n, 0);
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(s[j])) {
      seen[j] = 1;
      ++len;
    }
    ++counts[static_cast<std::size_t>(len - 1)];
  }
  return CycleType(std::move(counts));
}

int fixed_points(const Permutation& s) {
  int c = 0;
  for (std::size_t i = 0; i < s.size(); ++i) c += s[i] == static_cast<int>(i);
  return c;
}

int two_cycles(const Permutation& s) {
  int c = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto j = static_cast<std::size_t>(s[i]);
    if (j > i && s[j] == static_cast<int>(i)) ++c;
  }
  return c;
}

Integer class_size(const CycleType& c) {
  Integer denom = 1;
  for (int l = 1; l <= c.n(); ++l) {
    for (int k = 0; k < c.eta(l); ++k) denom *= l;
    denom *= factorial(static_cast<unsigned>(c.eta(l)));
  }
  return factorial(static_cast<unsigned>(c.n())) / denom;
}

std::vector<CycleType> all_cycle_types(int N) {
  std::vector<CycleType> out;
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(CycleType::from_lengths(N, parts));
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  rec(N, N);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t permutation_rank(const Permutation& s) {
  const std::size_t n = s.size();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) smaller += s[j] < s[i];
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

unsigned enumeration_guard(unsigned default_guard) {
  if (const char* env = std::getenv("PERMFIX_GUARD_N")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<unsigned>(v);
  }
  return default_guard;
}

void require_within_guard(const char* what, unsigned N, unsigned guard) {
  if (N > guard)
    throw std::out_of_range(std::string(what) + ": N=" + std::to_string(N) + " exceeds enumeration guard " +
                            std::to_string(guard) + " (set PERMFIX_GUARD_N to raise it)");
}

}  // namespace permfix
