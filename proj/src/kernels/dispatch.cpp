#include <cstdlib>
#include <cstring>

#include "emf/error.hpp"
#include "emf/kernels.hpp"
#include "kernels_impl.hpp"

namespace emf::kernels {

namespace {

Isa detect() noexcept {
  if (const char* force = std::getenv("EMF_FORCE_SCALAR"); force && std::strcmp(force, "0") != 0)
    return Isa::scalar;
  if (detail::avx2::supported()) return Isa::avx2;
  if (detail::neon::supported()) return Isa::neon;
  return Isa::scalar;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(std::string("kernel span size mismatch: ") + what);
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    case Isa::scalar: break;
  }
  return "scalar";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::avx2: return detail::avx2::supported();
    case Isa::neon: return detail::neon::supported();
    case Isa::scalar: break;
  }
  return true;
}

Isa active_isa() noexcept {
  static const Isa isa = detect();
  return isa;
}

void squared_distances(std::span<const double> xs, std::span<const double> ys, Point2D target,
                       std::span<double> out, Isa isa) {
  require(xs.size() == ys.size() && xs.size() == out.size(), "squared_distances");
  if (!isa_available(isa)) isa = Isa::scalar;
  const std::size_t n = xs.size();
  switch (isa) {
    case Isa::avx2: detail::avx2::squared_distances(xs.data(), ys.data(), n, target.x, target.y, out.data()); return;
    case Isa::neon: detail::neon::squared_distances(xs.data(), ys.data(), n, target.x, target.y, out.data()); return;
    case Isa::scalar: break;
  }
  detail::scalar::squared_distances(xs.data(), ys.data(), n, target.x, target.y, out.data());
}

void point_source_pd(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> eirp_w, Point2D target, double min_dist2,
                     std::span<double> dist2, std::span<double> pd, Isa isa) {
  const std::size_t n = xs.size();
  require(ys.size() == n && eirp_w.size() == n && dist2.size() == n && pd.size() == n,
          "point_source_pd");
  if (!isa_available(isa)) isa = Isa::scalar;
  const detail::SourceArrays src{xs.data(), ys.data(), eirp_w.data(), n};
  switch (isa) {
    case Isa::avx2: detail::avx2::point_source_pd(src, target.x, target.y, min_dist2, dist2.data(), pd.data()); return;
    case Isa::neon: detail::neon::point_source_pd(src, target.x, target.y, min_dist2, dist2.data(), pd.data()); return;
    case Isa::scalar: break;
  }
  detail::scalar::point_source_pd(src, target.x, target.y, min_dist2, dist2.data(), pd.data());
}

}  // namespace emf::kernels
