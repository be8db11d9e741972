#pragma once

#include "emf/topology.hpp"

namespace emf {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kBoltzmann = 1.380649e-23;      // J/K
inline constexpr double kReferenceTemperature = 290.0;  // K

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// Flat-top sectored pattern in azimuth. The main lobe covers `beamwidth`
/// centred on `boresight`; everything else sees `side_gain`. A valid pattern
/// radiates the same total power as an isotropic one:
///   main_gain * beamwidth + side_gain * (2pi - beamwidth) = 2pi.
struct AntennaPattern {
  double main_gain = 1.0;
  double side_gain = 1.0;
  double beamwidth = 3.141592653589793;  // rad
  double boresight = 0.0;                // rad

  /// Main gain solved from the normalization identity.
  static AntennaPattern sectored(double beamwidth, double side_gain, double boresight = 0.0);
  static AntennaPattern isotropic(double boresight = 0.0);
  /// beamwidth = 2pi / elements; a single element is isotropic.
  static AntennaPattern from_elements(unsigned elements, double side_gain, double boresight = 0.0);

  AntennaPattern steered(double new_boresight) const noexcept;
  /// Relative error of the normalization identity.
  double normalization_error() const noexcept;
  void validate() const;

  friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

double gain_at(const AntennaPattern& pattern, double azimuth) noexcept;

struct RadioParams {
  double carrier_hz = 0.0;
  double bandwidth_hz = 0.0;
  double tx_power_max_w = 0.0;  // UE
  double tx_power_min_w = 0.0;  // UE
  double noise_figure_db = 0.0;
  double pathloss_exponent = 2.0;
  double target_rx_power_w = 0.0;  // uplink power-control setpoint
  double reference_distance_m = 1.0;

  void validate() const;
  double wavelength_m() const noexcept { return kSpeedOfLight / carrier_hz; }
  /// k T0 B NF.
  double noise_power_w() const noexcept;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

/// Log-distance loss anchored at free space at the reference distance:
///   PL(d) = 20 log10(4 pi d_ref f / c) + 10 n log10(d / d_ref).
/// Distances below d_ref are clamped to it.
double pathloss_db(const RadioParams& params, double distance_m);

/// Extra attenuation of power density beyond the inverse-square law,
/// (d_ref / d)^(n - 2); exactly 1 for n = 2. Uses the same clamp as pathloss_db.
double excess_attenuation(const RadioParams& params, double distance_m) noexcept;

struct LinkBudget {
  double pathloss_db = 0.0;
  double tx_gain = 1.0;
  double rx_gain = 1.0;
  double rx_power_w = 0.0;
  double incident_pd_w_m2 = 0.0;
  double snr = 0.0;
  double distance_m = 0.0;
};

LinkBudget link_budget(const RadioParams& params, const AntennaPattern& tx_pattern,
                       const AntennaPattern& rx_pattern, const Point2D& tx_pos,
                       const Point2D& rx_pos, double tx_power_w);

/// Open-loop full-compensation power control clamped to the UE power range.
double uplink_power_control(const RadioParams& params, double pathloss_db, double tx_gain,
                            double rx_gain);

/// Shannon rate B log2(1 + snr).
double achievable_rate(double snr, double bandwidth_hz);

}  // namespace emf
