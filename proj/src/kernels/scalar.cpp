#include <algorithm>

#include "kernels_impl.hpp"

namespace emf::kernels::detail::scalar {

void squared_distances(const double* xs, const double* ys, std::size_t n, double tx, double ty,
                       double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - tx;
    const double dy = ys[i] - ty;
    out[i] = dx * dx + dy * dy;
  }
}

void point_source_pd(SourceArrays src, double tx, double ty, double min_dist2, double* dist2,
                     double* pd) {
  for (std::size_t i = 0; i < src.n; ++i) {
    const double dx = src.xs[i] - tx;
    const double dy = src.ys[i] - ty;
    const double d2 = std::max(dx * dx + dy * dy, min_dist2);
    dist2[i] = d2;
    pd[i] = src.eirp[i] / (kFourPi * d2);
  }
}

}  // namespace emf::kernels::detail::scalar
