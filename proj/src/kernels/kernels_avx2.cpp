// Compiled with -mavx2 and without -mfma; see kernels.hpp for the
// equivalence contract with the scalar reference.

#include <algorithm>
#include <cmath>

#include "hybridk/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>
#define HYBRIDK_HAVE_AVX2 1
#else
#define HYBRIDK_HAVE_AVX2 0
#endif

namespace hybridk::kernels {

#if HYBRIDK_HAVE_AVX2
namespace {

void min_sq_dist_avx2(const ColumnBlock& pts, const double* center, double* best) {
  const std::size_t n = pts.size();
  const std::size_t d = pts.dim();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < d; ++j) {
      const __m256d x = _mm256_loadu_pd(pts.axis(j).data() + i);
      const __m256d diff = _mm256_sub_pd(x, _mm256_set1_pd(center[j]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    // (acc < best) ? acc : best, same as std::min(best, acc)
    _mm256_storeu_pd(best + i, _mm256_min_pd(acc, _mm256_loadu_pd(best + i)));
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = pts.axis(j)[i] - center[j];
      acc = acc + diff * diff;
    }
    best[i] = std::min(best[i], acc);
  }
}

void thresholded_power_avx2(const double* sq, std::size_t n, double r, int z, double* out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d rv = _mm256_set1_pd(r);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_sub_pd(_mm256_sqrt_pd(_mm256_loadu_pd(sq + i)), rv);
    // (0 > t) ? 0 : t, same as std::max(t, 0.0)
    __m256d v = _mm256_max_pd(zero, t);
    if (z == 2) v = _mm256_mul_pd(v, v);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
    const double t = std::max(std::sqrt(sq[i]) - r, 0.0);
    out[i] = z == 2 ? t * t : t;
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", &min_sq_dist_avx2, &thresholded_power_avx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace hybridk::kernels
