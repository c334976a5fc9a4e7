#include <immintrin.h>

#include "rubricbench/simd/kernels.hpp"

namespace rubricbench::simd {

DotNorms dot_norms_avx2(const double* a, const double* b, std::size_t n) {
  __m256d vdot = _mm256_setzero_pd();
  __m256d vna = _mm256_setzero_pd();
  __m256d vnb = _mm256_setzero_pd();
  const std::size_t blocks = n / 4 * 4;
  for (std::size_t k = 0; k < blocks; k += 4) {
    const __m256d x = _mm256_loadu_pd(a + k);
    const __m256d y = _mm256_loadu_pd(b + k);
    vdot = _mm256_add_pd(vdot, _mm256_mul_pd(x, y));
    vna = _mm256_add_pd(vna, _mm256_mul_pd(x, x));
    vnb = _mm256_add_pd(vnb, _mm256_mul_pd(y, y));
  }
  alignas(32) double dot[4], na[4], nb[4];
  _mm256_store_pd(dot, vdot);
  _mm256_store_pd(na, vna);
  _mm256_store_pd(nb, vnb);
  for (std::size_t k = blocks; k < n; ++k) {
    const std::size_t lane = k % 4;
    dot[lane] += a[k] * b[k];
    na[lane] += a[k] * a[k];
    nb[lane] += b[k] * b[k];
  }
  return {(dot[0] + dot[1]) + (dot[2] + dot[3]), (na[0] + na[1]) + (na[2] + na[3]),
          (nb[0] + nb[1]) + (nb[2] + nb[3])};
}

}  // namespace rubricbench::simd
