#include "permfix/rng.hpp"
#include "permfix/simd/batch.hpp"

#include <algorithm>
#include <stdexcept>

namespace permfix::simd {

void advance_scalar(Batch& b, const StepTables& t, std::int64_t from, std::int64_t to) {
  for (int l = 0; l < kLanes; ++l) {
    std::uint64_t s0 = b.rng[0][l], s1 = b.rng[1][l], s2 = b.rng[2][l], s3 = b.rng[3][l];
    std::int64_t x = b.x[l], y = b.y[l];
    for (std::int64_t k = from; k < to; ++k) {
      const std::uint64_t r = rotl64(s1 * 5, 7) * 9;
      const std::uint64_t sh = s1 << 17;
      s2 ^= s0;
      s3 ^= s1;
      s1 ^= s2;
      s0 ^= s3;
      s2 ^= sh;
      s3 = rotl64(s3, 45);
      const std::uint64_t u = r >> 11;
      const std::int64_t nx = x + (u < t.down_x[x] ? -1 : (u < t.stay_x[x] ? 0 : 1));
      const std::int64_t ny = y + (u < t.down_y[y] ? -1 : (u < t.stay_y[y] ? 0 : 1));
      const std::int64_t n = k + 1;
      if (nx == ny) b.tau[l] = std::min(b.tau[l], n);
      if (nx == 0) b.tau0x[l] = std::min(b.tau0x[l], n);
      if (ny == 0) b.tau0y[l] = std::min(b.tau0y[l], n);
      if (x == y && nx != ny) b.z[l] = std::min(b.z[l], n);
      if (x <= y && nx > ny) b.zt[l] = std::min(b.zt[l], n);
      if (x >= y && nx < ny) b.zh[l] = std::min(b.zh[l], n);
      x = nx;
      y = ny;
    }
    b.rng[0][l] = s0;
    b.rng[1][l] = s1;
    b.rng[2][l] = s2;
    b.rng[3][l] = s3;
    b.x[l] = x;
    b.y[l] = y;
  }
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::best: return "best";
  }
  return "?";
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa resolve(Isa isa) {
  if (isa == Isa::best) return avx2_available() ? Isa::avx2 : Isa::scalar;
  if (isa == Isa::avx2 && !avx2_available()) throw std::runtime_error("avx2 requested but not supported by this CPU");
  return isa;
}

AdvanceFn select_advance(Isa isa) { return resolve(isa) == Isa::avx2 ? &advance_avx2 : &advance_scalar; }

}  // namespace permfix::simd
