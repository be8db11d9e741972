#pragma once

#include <cstddef>
#include <numbers>

namespace emf::kernels::detail {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

struct SourceArrays {
  const double* xs;
  const double* ys;
  const double* eirp;
  std::size_t n;
};

namespace scalar {
void squared_distances(const double* xs, const double* ys, std::size_t n, double tx, double ty,
                       double* out);
void point_source_pd(SourceArrays src, double tx, double ty, double min_dist2, double* dist2,
                     double* pd);
}  // namespace scalar

namespace avx2 {
bool supported() noexcept;
void squared_distances(const double* xs, const double* ys, std::size_t n, double tx, double ty,
                       double* out);
void point_source_pd(SourceArrays src, double tx, double ty, double min_dist2, double* dist2,
                     double* pd);
}  // namespace avx2

namespace neon {
bool supported() noexcept;
void squared_distances(const double* xs, const double* ys, std::size_t n, double tx, double ty,
                       double* out);
void point_source_pd(SourceArrays src, double tx, double ty, double min_dist2, double* dist2,
                     double* pd);
}  // namespace neon

}  // namespace emf::kernels::detail
