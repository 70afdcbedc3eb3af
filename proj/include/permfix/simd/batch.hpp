#pragma once

// Batch stepping of the monotone coupling: four replicas advance together,
// one per lane. The scalar kernel is the reference; the AVX2 kernel must
// produce identical lane states and records.

#include <cstdint>

namespace permfix::simd {

inline constexpr std::int64_t kNever = INT64_MAX;
inline constexpr int kLanes = 4;

/// Integer thresholds per state: a move down iff u < down[x], a stay iff
/// down[x] <= u < stay[x], else a move up; u is a 53-bit integer.
struct StepTables {
  const std::uint64_t* down_x;
  const std::uint64_t* stay_x;
  const std::uint64_t* down_y;
  const std::uint64_t* stay_y;
};

/// Lane-major state of four coupled replicas. Records hold the first time n
/// at which the event is seen (kNever if not yet).
struct Batch {
  std::uint64_t rng[4][kLanes];  ///< xoshiro256** word w of lane l at rng[w][l]
  std::int64_t x[kLanes];
  std::int64_t y[kLanes];
  std::int64_t tau[kLanes];    ///< X(n) = Y(n)
  std::int64_t tau0x[kLanes];  ///< X(n) = 0
  std::int64_t tau0y[kLanes];  ///< Y(n) = 0
  std::int64_t z[kLanes];      ///< n = k+1 for the first k with X(k)=Y(k), X(k+1)!=Y(k+1)
  std::int64_t zt[kLanes];     ///< same for X(k)<=Y(k), X(k+1)>Y(k+1)
  std::int64_t zh[kLanes];     ///< same for X(k)>=Y(k), X(k+1)<Y(k+1)
};

enum class Isa { scalar, avx2, best };

const char* isa_name(Isa isa);
bool avx2_available();
/// Resolves best to the widest supported variant; throws std::runtime_error
/// when avx2 is requested on a machine without it.
Isa resolve(Isa isa);

/// Steps every lane from time `from` to time `to`.
using AdvanceFn = void (*)(Batch& b, const StepTables& t, std::int64_t from, std::int64_t to);

void advance_scalar(Batch& b, const StepTables& t, std::int64_t from, std::int64_t to);
void advance_avx2(Batch& b, const StepTables& t, std::int64_t from, std::int64_t to);

AdvanceFn select_advance(Isa isa);

}  // namespace permfix::simd
