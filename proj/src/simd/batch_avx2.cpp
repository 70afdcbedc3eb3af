#include "permfix/simd/batch.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

#include <stdexcept>

namespace permfix::simd {

#if defined(__AVX2__)

namespace {

inline __m256i rotl(__m256i v, int k) {
  return _mm256_or_si256(_mm256_slli_epi64(v, k), _mm256_srli_epi64(v, 64 - k));
}

inline __m256i load(const std::int64_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline __m256i load(const std::uint64_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(std::int64_t* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }
inline void store(std::uint64_t* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

// min(rec, n) on lanes where mask is set; records only ever decrease once.
inline __m256i record(__m256i rec, __m256i mask, __m256i n) {
  const __m256i cand = _mm256_blendv_epi8(rec, n, mask);
  return _mm256_blendv_epi8(rec, cand, _mm256_cmpgt_epi64(rec, cand));
}

}  // namespace

void advance_avx2(Batch& b, const StepTables& t, std::int64_t from, std::int64_t to) {
  __m256i s0 = load(b.rng[0]), s1 = load(b.rng[1]), s2 = load(b.rng[2]), s3 = load(b.rng[3]);
  __m256i x = load(b.x), y = load(b.y);
  __m256i tau = load(b.tau), t0x = load(b.tau0x), t0y = load(b.tau0y);
  __m256i z = load(b.z), zt = load(b.zt), zh = load(b.zh);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i zero = _mm256_setzero_si256();
  const auto* dx = reinterpret_cast<const long long*>(t.down_x);
  const auto* sx = reinterpret_cast<const long long*>(t.stay_x);
  const auto* dy = reinterpret_cast<const long long*>(t.down_y);
  const auto* sy = reinterpret_cast<const long long*>(t.stay_y);
  for (std::int64_t k = from; k < to; ++k) {
    const __m256i s1x5 = _mm256_add_epi64(_mm256_slli_epi64(s1, 2), s1);
    const __m256i r7 = rotl(s1x5, 7);
    const __m256i r = _mm256_add_epi64(_mm256_slli_epi64(r7, 3), r7);
    const __m256i sh = _mm256_slli_epi64(s1, 17);
    s2 = _mm256_xor_si256(s2, s0);
    s3 = _mm256_xor_si256(s3, s1);
    s1 = _mm256_xor_si256(s1, s2);
    s0 = _mm256_xor_si256(s0, s3);
    s2 = _mm256_xor_si256(s2, sh);
    s3 = rotl(s3, 45);
    const __m256i u = _mm256_srli_epi64(r, 11);

    // Thresholds are at most 2^53, so signed comparisons are exact.
    const __m256i down_x = _mm256_cmpgt_epi64(_mm256_i64gather_epi64(dx, x, 8), u);
    const __m256i stay_x = _mm256_cmpgt_epi64(_mm256_i64gather_epi64(sx, x, 8), u);
    const __m256i down_y = _mm256_cmpgt_epi64(_mm256_i64gather_epi64(dy, y, 8), u);
    const __m256i stay_y = _mm256_cmpgt_epi64(_mm256_i64gather_epi64(sy, y, 8), u);
    // Masks are -1 where set: x + 1 + stay + down gives x-1, x or x+1.
    const __m256i nx = _mm256_add_epi64(_mm256_add_epi64(x, one), _mm256_add_epi64(stay_x, down_x));
    const __m256i ny = _mm256_add_epi64(_mm256_add_epi64(y, one), _mm256_add_epi64(stay_y, down_y));

    const __m256i n = _mm256_set1_epi64x(k + 1);
    const __m256i eq_now = _mm256_cmpeq_epi64(x, y);
    const __m256i eq_next = _mm256_cmpeq_epi64(nx, ny);
    const __m256i x_gt_y = _mm256_cmpgt_epi64(x, y);
    const __m256i y_gt_x = _mm256_cmpgt_epi64(y, x);
    const __m256i nx_gt = _mm256_cmpgt_epi64(nx, ny);
    const __m256i ny_gt = _mm256_cmpgt_epi64(ny, nx);

    tau = record(tau, eq_next, n);
    t0x = record(t0x, _mm256_cmpeq_epi64(nx, zero), n);
    t0y = record(t0y, _mm256_cmpeq_epi64(ny, zero), n);
    z = record(z, _mm256_andnot_si256(eq_next, eq_now), n);
    zt = record(zt, _mm256_andnot_si256(x_gt_y, nx_gt), n);
    zh = record(zh, _mm256_andnot_si256(y_gt_x, ny_gt), n);
    x = nx;
    y = ny;
  }
  store(b.rng[0], s0);
  store(b.rng[1], s1);
  store(b.rng[2], s2);
  store(b.rng[3], s3);
  store(b.x, x);
  store(b.y, y);
  store(b.tau, tau);
  store(b.tau0x, t0x);
  store(b.tau0y, t0y);
  store(b.z, z);
  store(b.zt, zt);
  store(b.zh, zh);
}

#else

void advance_avx2(Batch&, const StepTables&, std::int64_t, std::int64_t) {
  throw std::runtime_error("advance_avx2: built without AVX2 support");
}

#endif

}  // namespace permfix::simd
