#include "permfix/lumping.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace permfix {

PartitionedChain::PartitionedChain(StochasticKernel q_, ExactDist mu_, std::vector<long> blocks_)
    : q(std::move(q_)), mu(std::move(mu_)), blocks(std::move(blocks_)) {
  if (blocks.size() != q.size()) throw std::invalid_argument("PartitionedChain: one block id per state expected");
  if (!is_invariant(q, mu)) throw std::invalid_argument("PartitionedChain: mu is not invariant for Q");
}

std::vector<long> PartitionedChain::block_ids() const {
  std::vector<long> ids = blocks;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

namespace {

struct BlockIndex {
  std::vector<long> ids;
  std::vector<std::size_t> of_state;  // block position per state index

  explicit BlockIndex(const PartitionedChain& c) : ids(c.block_ids()), of_state(c.blocks.size()) {
    for (std::size_t i = 0; i < c.blocks.size(); ++i)
      of_state[i] = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), c.blocks[i]) - ids.begin());
  }
};

std::vector<Rational> state_weights(const PartitionedChain& c) {
  std::vector<Rational> w(c.q.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = c.mu(c.q.states()[i]);
  return w;
}

}  // namespace

Projection project(const PartitionedChain& chain, bool verify) {
  const BlockIndex bi(chain);
  const std::size_t nv = bi.ids.size();
  const auto w = state_weights(chain);
  std::vector<Rational> block_mass(nv);
  for (std::size_t i = 0; i < w.size(); ++i) block_mass[bi.of_state[i]] += w[i];
  for (std::size_t v = 0; v < nv; ++v)
    if (block_mass[v] == 0) throw std::invalid_argument("project: block " + std::to_string(bi.ids[v]) + " has zero mass");

  RationalMatrix pm(nv, nv);
  std::vector<std::map<std::size_t, Rational>> acc(nv);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) continue;
    auto& row = acc[bi.of_state[i]];
    for (const auto& e : chain.q.matrix().row(i)) row[bi.of_state[e.col]] += w[i] * e.value;
  }
  for (std::size_t v = 0; v < nv; ++v)
    for (const auto& [c, val] : acc[v]) pm.add(v, c, val / block_mass[v]);

  Projection out{StochasticKernel(chain.q.label() + "/proj", bi.ids, std::move(pm)), RationalMatrix(0, 0),
                 ExactDist(chain.mu.label() + "/proj", bi.ids, block_mass), false, false};
  out.mu1_invariant = is_invariant(out.p, out.mu1);
  if (verify) {
    RationalMatrix lambda(chain.q.size(), nv);
    for (std::size_t i = 0; i < chain.q.size(); ++i)
      for (std::size_t v = 0; v < nv; ++v) lambda.add(i, v, block_mass[v]);
    out.intertwining = (chain.q.matrix() * lambda) == (lambda * out.p.matrix());
    out.lambda = std::move(lambda);
  }
  return out;
}

ReversibilityTransfer reversibility_transfer(const PartitionedChain& chain) {
  const Projection pr = project(chain, false);
  return {check_reversibility(chain.q, chain.mu), check_reversibility(pr.p, pr.mu1)};
}

namespace {

std::vector<std::vector<Rational>> block_rows(const PartitionedChain& chain, const BlockIndex& bi) {
  std::vector<std::vector<Rational>> rows(chain.q.size(), std::vector<Rational>(bi.ids.size()));
  for (std::size_t i = 0; i < chain.q.size(); ++i)
    for (const auto& e : chain.q.matrix().row(i)) rows[i][bi.of_state[e.col]] += e.value;
  return rows;
}

}  // namespace

std::vector<std::vector<bool>> dynkin_check(const PartitionedChain& chain) {
  const BlockIndex bi(chain);
  const std::size_t nv = bi.ids.size();
  const auto rows = block_rows(chain, bi);
  std::vector<std::vector<bool>> table(nv, std::vector<bool>(nv, true));
  std::vector<std::ptrdiff_t> rep(nv, -1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t v = bi.of_state[i];
    if (rep[v] < 0) {
      rep[v] = static_cast<std::ptrdiff_t>(i);
      continue;
    }
    const auto& r0 = rows[static_cast<std::size_t>(rep[v])];
    for (std::size_t c = 0; c < nv; ++c)
      if (rows[i][c] != r0[c]) table[v][c] = false;
  }
  return table;
}

bool dynkin_holds(const std::vector<std::vector<bool>>& table) {
  for (const auto& r : table)
    for (bool b : r)
      if (!b) return false;
  return true;
}

StochasticKernel classical_lumped(const PartitionedChain& chain) {
  const BlockIndex bi(chain);
  const std::size_t nv = bi.ids.size();
  const auto rows = block_rows(chain, bi);
  RationalMatrix m(nv, nv);
  std::vector<bool> done(nv, false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t v = bi.of_state[i];
    if (done[v]) continue;
    done[v] = true;
    for (std::size_t c = 0; c < nv; ++c) m.add(v, c, rows[i][c]);
  }
  return StochasticKernel(chain.q.label() + "/lumped", bi.ids, std::move(m));
}

StochasticKernel transposition_walk(unsigned N) {
  if (N < 2) throw std::invalid_argument("transposition_walk: N must be >= 2");
  require_within_guard("transposition_walk", N, enumeration_guard(8));
  const Rational rate(Integer(2), Integer(static_cast<long>(N) * (static_cast<long>(N) - 1)));
  const auto size = static_cast<std::size_t>(factorial(N));
  RationalMatrix m(size, size);
  std::size_t rank = 0;
  for_each_permutation(static_cast<int>(N), [&](const Permutation& s) {
    Permutation t = s;
    for (int i = 0; i < static_cast<int>(N); ++i)
      for (int j = i + 1; j < static_cast<int>(N); ++j) {
        // tau o sigma swaps the values i and j in the image array.
        for (auto& v : t) v = v == i ? j : (v == j ? i : v);
        m.add(rank, permutation_rank(t), rate);
        for (auto& v : t) v = v == i ? j : (v == j ? i : v);
      }
    ++rank;
  });
  std::vector<long> states(size);
  for (std::size_t i = 0; i < size; ++i) states[i] = static_cast<long>(i);
  return StochasticKernel("T_" + std::to_string(N), std::move(states), std::move(m));
}

ExactDist uniform_on_sn(unsigned N) {
  const auto size = static_cast<std::size_t>(factorial(N));
  std::vector<long> s(size);
  for (std::size_t i = 0; i < size; ++i) s[i] = static_cast<long>(i);
  return ExactDist("nu_" + std::to_string(N), std::move(s), std::vector<Rational>(size, Rational(Integer(1), factorial(N))));
}

StochasticKernel cycle_type_kernel_direct(unsigned N, const std::vector<CycleType>& types) {
  if (N < 2) throw std::invalid_argument("cycle_type_kernel_direct: N must be >= 2");
  std::map<CycleType, std::size_t> pos;
  for (std::size_t i = 0; i < types.size(); ++i) pos.emplace(types[i], i);
  const Integer nn1 = Integer(static_cast<long>(N) * (static_cast<long>(N) - 1));
  RationalMatrix m(types.size(), types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto len = types[i].lengths();
    auto target = [&](std::vector<int> l) { return pos.at(CycleType::from_lengths(static_cast<int>(N), l)); };
    // Two distinct cycles of lengths a and b merge: a*b of the N(N-1)/2 pairs.
    for (std::size_t a = 0; a < len.size(); ++a)
      for (std::size_t b = a + 1; b < len.size(); ++b) {
        std::vector<int> l;
        for (std::size_t k = 0; k < len.size(); ++k)
          if (k != a && k != b) l.push_back(len[k]);
        l.push_back(len[a] + len[b]);
        m.add(i, target(l), Rational(Integer(2 * len[a] * len[b]), nn1));
      }
    // A pair inside one L-cycle at cyclic distance d splits it into d and L-d;
    // L/2 unordered pairs per d.
    for (std::size_t a = 0; a < len.size(); ++a)
      for (int d = 1; d < len[a]; ++d) {
        std::vector<int> l;
        for (std::size_t k = 0; k < len.size(); ++k)
          if (k != a) l.push_back(len[k]);
        l.push_back(d);
        l.push_back(len[a] - d);
        m.add(i, target(l), Rational(Integer(len[a]), nn1));
      }
  }
  std::vector<long> states(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) states[i] = static_cast<long>(i);
  return StochasticKernel("C_" + std::to_string(N), std::move(states), std::move(m));
}

ExactDist cycle_type_law(unsigned N, const std::vector<CycleType>& types) {
  std::vector<long> s;
  std::vector<Rational> w;
  for (std::size_t i = 0; i < types.size(); ++i) {
    s.push_back(static_cast<long>(i));
    w.emplace_back(class_size(types[i]), factorial(N));
  }
  return ExactDist("mu_types_" + std::to_string(N), std::move(s), std::move(w));
}

CycleTypeChain cycle_type_chain(unsigned N) {
  require_within_guard("cycle_type_chain", N, enumeration_guard(8));
  const auto types = all_cycle_types(static_cast<int>(N));
  std::map<CycleType, long> pos;
  for (std::size_t i = 0; i < types.size(); ++i) pos.emplace(types[i], static_cast<long>(i));

  std::vector<long> type_of_perm;
  for_each_permutation(static_cast<int>(N), [&](const Permutation& s) { type_of_perm.push_back(pos.at(cycle_type(s))); });
  const PartitionedChain sn(transposition_walk(N), uniform_on_sn(N), type_of_perm);
  const bool dyn = dynkin_holds(dynkin_check(sn));
  const Projection lumped = project(sn, false);

  const StochasticKernel direct = cycle_type_kernel_direct(N, types);
  if (!(lumped.p.matrix() == direct.matrix()))
    throw std::logic_error("cycle_type_chain: lumped transposition walk and merge/split kernel disagree");
  const ExactDist law = cycle_type_law(N, types);
  if (!(law.weights() == lumped.mu1.weights()))
    throw std::logic_error("cycle_type_chain: class sizes disagree with enumeration");

  std::vector<long> eta1;
  for (const auto& t : types) eta1.push_back(t.eta(1));
  return {types, PartitionedChain(direct, law, std::move(eta1)), dyn};
}

nlohmann::json partition_to_json(const PartitionedChain& chain) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < chain.blocks.size(); ++i) j[std::to_string(chain.q.states()[i])] = chain.blocks[i];
  return j;
}

}  // namespace permfix
