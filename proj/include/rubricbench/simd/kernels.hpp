#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace rubricbench::simd {

// dot(a, b), |a|^2 and |b|^2 in one pass.
struct DotNorms {
  double dot = 0.0;
  double norm_a_sq = 0.0;
  double norm_b_sq = 0.0;
};

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend);

// All kernels sum in four interleaved lanes (element k goes to lane k % 4),
// then combine as (l0 + l1) + (l2 + l3), without fused multiply-add. The
// vector kernels therefore return bit-identical results to the scalar one.
DotNorms dot_norms_scalar(const double* a, const double* b, std::size_t n);
#if defined(RUBRICBENCH_HAVE_AVX2)
DotNorms dot_norms_avx2(const double* a, const double* b, std::size_t n);
#endif
#if defined(RUBRICBENCH_HAVE_NEON)
DotNorms dot_norms_neon(const double* a, const double* b, std::size_t n);
#endif

// Backends compiled in and supported by this CPU; Scalar is always first.
std::vector<Backend> available_backends();

// Best available backend, or Scalar when RUBRICBENCH_SIMD=scalar.
Backend active_backend();

DotNorms dot_norms(Backend backend, const double* a, const double* b, std::size_t n);
DotNorms dot_norms(const double* a, const double* b, std::size_t n);

}  // namespace rubricbench::simd
