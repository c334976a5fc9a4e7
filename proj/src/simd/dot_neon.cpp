#include <arm_neon.h>

#include "rubricbench/simd/kernels.hpp"

namespace rubricbench::simd {

// Two 2-lane registers stand in for lanes {0,1} and {2,3}.
DotNorms dot_norms_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t dot_lo = vdupq_n_f64(0.0), dot_hi = vdupq_n_f64(0.0);
  float64x2_t na_lo = vdupq_n_f64(0.0), na_hi = vdupq_n_f64(0.0);
  float64x2_t nb_lo = vdupq_n_f64(0.0), nb_hi = vdupq_n_f64(0.0);
  const std::size_t blocks = n / 4 * 4;
  for (std::size_t k = 0; k < blocks; k += 4) {
    const float64x2_t x0 = vld1q_f64(a + k), x1 = vld1q_f64(a + k + 2);
    const float64x2_t y0 = vld1q_f64(b + k), y1 = vld1q_f64(b + k + 2);
    dot_lo = vaddq_f64(dot_lo, vmulq_f64(x0, y0));
    dot_hi = vaddq_f64(dot_hi, vmulq_f64(x1, y1));
    na_lo = vaddq_f64(na_lo, vmulq_f64(x0, x0));
    na_hi = vaddq_f64(na_hi, vmulq_f64(x1, x1));
    nb_lo = vaddq_f64(nb_lo, vmulq_f64(y0, y0));
    nb_hi = vaddq_f64(nb_hi, vmulq_f64(y1, y1));
  }
  double dot[4], na[4], nb[4];
  vst1q_f64(dot, dot_lo);
  vst1q_f64(dot + 2, dot_hi);
  vst1q_f64(na, na_lo);
  vst1q_f64(na + 2, na_hi);
  vst1q_f64(nb, nb_lo);
  vst1q_f64(nb + 2, nb_hi);
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
