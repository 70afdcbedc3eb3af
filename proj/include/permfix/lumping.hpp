#pragma once

// Projection of a Markov kernel through a partition of its state space, the
// intertwining and reversibility checks that go with it, and the symmetric
// group instance: the transposition walk and its cycle-type chain.

#include "permfix/exactdist.hpp"
#include "permfix/kernel.hpp"
#include "permfix/perm.hpp"

#include <vector>

namespace permfix {

/// Kernel Q on W with invariant law mu and a partition of W given as a block
/// id per state index. The construction checks mu Q = mu exactly.
struct PartitionedChain {
  PartitionedChain(StochasticKernel q_, ExactDist mu_, std::vector<long> blocks_);

  StochasticKernel q;
  ExactDist mu;
  std::vector<long> blocks;  ///< block id of q.states()[i]

  /// Sorted distinct block ids; the projected state list.
  std::vector<long> block_ids() const;
};

struct Projection {
  StochasticKernel p;        ///< P(v,v') = sum_{w in A_v, w' in A_v'} mu(w)/mu(A_v) Q(w,w')
  RationalMatrix lambda;     ///< Lambda(w,v) = mu(A_v), |W| x |V|
  ExactDist mu1;             ///< mu1(v) = mu(A_v)
  bool intertwining = false; ///< Q Lambda = Lambda P, exactly
  bool mu1_invariant = false;
};

/// Throws std::invalid_argument on a block of zero mass. With verify=false
/// the Lambda matrix and the intertwining product are skipped.
Projection project(const PartitionedChain& chain, bool verify = true);

struct ReversibilityTransfer {
  ReversibilityReport upstream;   ///< mu for Q
  ReversibilityReport projected;  ///< mu1 for P
  /// False only when mu is reversible for Q but mu1 is not for P.
  bool holds() const { return !upstream.pass() || projected.pass(); }
};

ReversibilityTransfer reversibility_transfer(const PartitionedChain& chain);

/// Entry (v,v') is true iff Q(w, A_v') is the same for every w in A_v.
std::vector<std::vector<bool>> dynkin_check(const PartitionedChain& chain);
bool dynkin_holds(const std::vector<std::vector<bool>>& table);

/// The classical lumped kernel Q(w, A_v') read off one representative per
/// block. Meaningful only when the Dynkin condition holds.
StochasticKernel classical_lumped(const PartitionedChain& chain);

/// Random transposition walk on S_N; state i is the permutation of rank i.
/// Refuses N above the enumeration guard (default 8).
StochasticKernel transposition_walk(unsigned N);

/// Uniform law on S_N indexed by rank.
ExactDist uniform_on_sn(unsigned N);

struct CycleTypeChain {
  std::vector<CycleType> types;  ///< state i of chain.q is types[i]
  PartitionedChain chain;        ///< blocks are eta_1
  bool dynkin_on_sn = false;     ///< lumping S_N -> types satisfied Dynkin
};

/// Coagulation-fragmentation kernel on cycle types, built by lumping the
/// transposition walk and by direct merge/split case analysis; a mismatch
/// between the two throws std::logic_error.
CycleTypeChain cycle_type_chain(unsigned N);

/// The merge/split construction alone (no guard).
StochasticKernel cycle_type_kernel_direct(unsigned N, const std::vector<CycleType>& types);

/// Class sizes / N! over the given types.
ExactDist cycle_type_law(unsigned N, const std::vector<CycleType>& types);

nlohmann::json partition_to_json(const PartitionedChain& chain);

}  // namespace permfix
