#include "kernels_impl.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace emf::kernels::detail::neon {

#if defined(__aarch64__)

bool supported() noexcept { return true; }

void squared_distances(const double* xs, const double* ys, std::size_t n, double tx, double ty,
                       double* out) {
  const float64x2_t vtx = vdupq_n_f64(tx);
  const float64x2_t vty = vdupq_n_f64(ty);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vtx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vty);
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
  }
  scalar::squared_distances(xs + i, ys + i, n - i, tx, ty, out + i);
}

void point_source_pd(SourceArrays src, double tx, double ty, double min_dist2, double* dist2,
                     double* pd) {
  const float64x2_t vtx = vdupq_n_f64(tx);
  const float64x2_t vty = vdupq_n_f64(ty);
  const float64x2_t vmin = vdupq_n_f64(min_dist2);
  const float64x2_t vfour_pi = vdupq_n_f64(kFourPi);
  std::size_t i = 0;
  for (; i + 2 <= src.n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(src.xs + i), vtx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(src.ys + i), vty);
    float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    d2 = vmaxq_f64(d2, vmin);
    vst1q_f64(dist2 + i, d2);
    vst1q_f64(pd + i, vdivq_f64(vld1q_f64(src.eirp + i), vmulq_f64(vfour_pi, d2)));
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

}  // namespace emf::kernels::detail::neon
