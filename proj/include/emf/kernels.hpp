#pragma once

// Batched inner loops of the exposure model. Each kernel has a scalar
// reference implementation and vector variants (AVX2 on x86-64, NEON on
// AArch64). All variants perform the same IEEE operations in the same order
// without contraction, so their results are bit-identical to the scalar path.

#include <span>
#include <string_view>

#include "emf/topology.hpp"

namespace emf::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Whether `isa` can run on this machine.
bool isa_available(Isa isa) noexcept;

/// Best available ISA, chosen once per process. Setting EMF_FORCE_SCALAR=1 in
/// the environment pins the scalar path.
Isa active_isa() noexcept;

/// out[i] = |source_i - target|^2.
void squared_distances(std::span<const double> xs, std::span<const double> ys, Point2D target,
                       std::span<double> out, Isa isa = active_isa());

/// Free-space power density of point sources at `target`:
///   dist2[i] = max(|source_i - target|^2, min_dist2)
///   pd[i]    = eirp[i] / (4 pi dist2[i])
/// All spans must have equal length.
void point_source_pd(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> eirp_w, Point2D target, double min_dist2,
                     std::span<double> dist2, std::span<double> pd, Isa isa = active_isa());

}  // namespace emf::kernels
