#include "rubricbench/simd/kernels.hpp"

namespace rubricbench::simd {

DotNorms dot_norms_scalar(const double* a, const double* b, std::size_t n) {
  double dot[4] = {0, 0, 0, 0};
  double na[4] = {0, 0, 0, 0};
  double nb[4] = {0, 0, 0, 0};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lane = k % 4;
    dot[lane] += a[k] * b[k];
    na[lane] += a[k] * a[k];
    nb[lane] += b[k] * b[k];
  }
  return {(dot[0] + dot[1]) + (dot[2] + dot[3]), (na[0] + na[1]) + (na[2] + na[3]),
          (nb[0] + nb[1]) + (nb[2] + nb[3])};
}

}  // namespace rubricbench::simd
