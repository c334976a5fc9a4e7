#include <cstdlib>
#include <string>

#include "rubricbench/error.hpp"
#include "rubricbench/simd/kernels.hpp"

namespace rubricbench::simd {

namespace {

bool cpu_has(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2:
#if defined(RUBRICBENCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(RUBRICBENCH_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

Backend select_backend() {
  if (const char* forced = std::getenv("RUBRICBENCH_SIMD"); forced && std::string(forced) == "scalar") {
    return Backend::Scalar;
  }
  return available_backends().back();
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "scalar";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (cpu_has(b)) out.push_back(b);
  }
  return out;
}

Backend active_backend() {
  static const Backend backend = select_backend();
  return backend;
}

DotNorms dot_norms(Backend backend, const double* a, const double* b, std::size_t n) {
  if (!cpu_has(backend)) throw Error("SIMD backend " + std::string(to_string(backend)) + " is not available");
  switch (backend) {
#if defined(RUBRICBENCH_HAVE_AVX2)
    case Backend::Avx2: return dot_norms_avx2(a, b, n);
#endif
#if defined(RUBRICBENCH_HAVE_NEON)
    case Backend::Neon: return dot_norms_neon(a, b, n);
#endif
    default: return dot_norms_scalar(a, b, n);
  }
}

DotNorms dot_norms(const double* a, const double* b, std::size_t n) { return dot_norms(active_backend(), a, b, n); }

}  // namespace rubricbench::simd
