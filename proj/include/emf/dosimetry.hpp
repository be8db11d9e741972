#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "emf/radio.hpp"
#include "emf/topology.hpp"

namespace emf {

struct DielectricRow {
  double frequency_hz = 0.0;
  double eps_real = 1.0;
  double eps_imag = 0.0;  // loss part, eps = eps_real - j eps_imag

  friend bool operator==(const DielectricRow&, const DielectricRow&) = default;
};

/// Homogeneous tissue half-space described by a tabulated complex relative
/// permittivity. Between rows each component is interpolated linearly in
/// log-frequency.
class TissueModel {
public:
  TissueModel(std::vector<DielectricRow> rows, double density_kg_m3);

  /// Rows of "frequency_hz,eps_real,eps_imag"; '#' starts a comment.
  static TissueModel parse_table(std::string_view text, double density_kg_m3);
  static TissueModel load_table(const std::filesystem::path& path, double density_kg_m3);

  const std::vector<DielectricRow>& rows() const noexcept { return rows_; }
  double density_kg_m3() const noexcept { return density_; }
  bool covers(double frequency_hz) const noexcept;

  /// Interpolated (eps_real, eps_imag) at `frequency_hz`.
  DielectricRow at(double frequency_hz) const;
  /// eps_real - j eps_imag.
  std::complex<double> permittivity(double frequency_hz) const;

  friend bool operator==(const TissueModel&, const TissueModel&) = default;

private:
  std::vector<DielectricRow> rows_;
  double density_ = 0.0;
};

inline constexpr double kDefaultSkinDensity = 1100.0;  // kg/m^3

/// Power penetration depth 1 / (2 alpha), alpha = k0 |Im sqrt(eps)|.
double penetration_depth(const TissueModel& tissue, double frequency_hz);

/// Normal-incidence Fresnel power transmittance 1 - |Gamma|^2 at the air/tissue boundary.
double transmittance(const TissueModel& tissue, double frequency_hz);

/// Surface SAR of the power density transmitted into the tissue:
///   SAR = T * PD / (rho * delta_p).
double surface_sar(double incident_pd_w_m2, const TissueModel& tissue, double frequency_hz);

struct ExposureLimits {
  double pd_limit_w_m2 = 10.0;
  double sar_limit_w_kg = 1.6;
  double sar_trigger_w_kg = 1.6;

  void validate() const;
  friend bool operator==(const ExposureLimits&, const ExposureLimits&) = default;
};

/// Source id of the user's own device in uplink reports; BS sources use their index.
inline constexpr std::int64_t kDeviceSource = -1;

struct SourceContribution {
  std::int64_t source = 0;
  double pd_w_m2 = 0.0;
};

struct ExposureReport {
  double incident_pd_w_m2 = 0.0;
  double sar_w_kg = 0.0;
  std::vector<SourceContribution> per_source;
  double pd_limit_fraction = 0.0;
  double sar_limit_fraction = 0.0;
  bool compliant = true;
};

/// Fill the limit fractions and the compliance flag (inclusive at the limit).
ExposureReport compliance(ExposureReport report, const ExposureLimits& limits);

/// Total exposure at UE `ue_index` from every BS in `topology`. `beams[i]`
/// and `powers_w[i]` describe BS i as it is transmitting at this instant.
ExposureReport downlink_exposure(const Topology& topology, std::span<const AntennaPattern> beams,
                                 std::span<const double> powers_w, const RadioParams& params,
                                 std::size_t ue_index, const TissueModel& tissue,
                                 const ExposureLimits& limits);

/// Exposure of the user's head from their own handset. The head sits at
/// `device_head_distance_m` in direction `head_azimuth`; far-field formula.
ExposureReport uplink_exposure(double ue_tx_power_w, const AntennaPattern& ue_pattern,
                               double head_azimuth, double device_head_distance_m,
                               const TissueModel& tissue, double frequency_hz,
                               const ExposureLimits& limits);

}  // namespace emf
