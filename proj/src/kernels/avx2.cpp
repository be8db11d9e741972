#include "kernels_impl.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#define EMF_HAVE_AVX2_PATH 1
#endif

namespace emf::kernels::detail::avx2 {

#if defined(EMF_HAVE_AVX2_PATH)

bool supported() noexcept { return __builtin_cpu_supports("avx2"); }

__attribute__((target("avx2"))) void squared_distances(const double* xs, const double* ys,
                                                       std::size_t n, double tx, double ty,
                                                       double* out) {
  const __m256d vtx = _mm256_set1_pd(tx);
  const __m256d vty = _mm256_set1_pd(ty);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vtx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vty);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  scalar::squared_distances(xs + i, ys + i, n - i, tx, ty, out + i);
}

__attribute__((target("avx2"))) void point_source_pd(SourceArrays src, double tx, double ty,
                                                     double min_dist2, double* dist2, double* pd) {
  const __m256d vtx = _mm256_set1_pd(tx);
  const __m256d vty = _mm256_set1_pd(ty);
  const __m256d vmin = _mm256_set1_pd(min_dist2);
  const __m256d vfour_pi = _mm256_set1_pd(kFourPi);
  std::size_t i = 0;
  for (; i + 4 <= src.n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(src.xs + i), vtx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(src.ys + i), vty);
    __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    d2 = _mm256_max_pd(d2, vmin);
    _mm256_storeu_pd(dist2 + i, d2);
    const __m256d denom = _mm256_mul_pd(vfour_pi, d2);
    _mm256_storeu_pd(pd + i, _mm256_div_pd(_mm256_loadu_pd(src.eirp + i), denom));
  }
  SourceArrays tail{src.xs + i, src.ys + i, src.eirp + i, src.n - i};
  scalar::point_source_pd(tail, tx, ty, min_dist2, dist2 + i, pd + i);
}

#else

bool supported() noexcept { return false; }

void squared_distances(const double* xs, const double* ys, std::size_t n, double tx, double ty,
                       double* out) {
  scalar::squared_distances(xs, ys, n, tx, ty, out);
}

void point_source_pd(SourceArrays src, double tx, double ty, double min_dist2, double* dist2,
                     double* pd) {
  scalar::point_source_pd(src, tx, ty, min_dist2, dist2, pd);
}

#endif

}  // namespace emf::kernels::detail::avx2
