#include "emf/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emf/error.hpp"

namespace emf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;
}  // namespace

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

AntennaPattern AntennaPattern::sectored(double beamwidth, double side_gain, double boresight) {
  if (!(beamwidth > 0.0 && beamwidth < kTwoPi)) throw Error("antenna: beamwidth must lie in (0, 2pi)");
  if (!(side_gain > 0.0 && side_gain <= 1.0)) throw Error("antenna: side_gain must lie in (0, 1]");
  AntennaPattern p;
  p.beamwidth = beamwidth;
  p.side_gain = side_gain;
  p.main_gain = (kTwoPi - side_gain * (kTwoPi - beamwidth)) / beamwidth;
  p.boresight = boresight;
  return p;
}

AntennaPattern AntennaPattern::isotropic(double boresight) {
  AntennaPattern p;
  p.boresight = boresight;
  return p;
}

AntennaPattern AntennaPattern::from_elements(unsigned elements, double side_gain, double boresight) {
  if (elements == 0) throw Error("antenna: element count must be >= 1");
  if (elements == 1) return isotropic(boresight);
  return sectored(kTwoPi / static_cast<double>(elements), side_gain, boresight);
}

AntennaPattern AntennaPattern::steered(double new_boresight) const noexcept {
  AntennaPattern p = *this;
  p.boresight = new_boresight;
  return p;
}

double AntennaPattern::normalization_error() const noexcept {
  const double total = main_gain * beamwidth + side_gain * (kTwoPi - beamwidth);
  return std::fabs(total - kTwoPi) / kTwoPi;
}

void AntennaPattern::validate() const {
  if (!(side_gain > 0.0) || !(main_gain >= side_gain)) throw Error("antenna: require main_gain >= side_gain > 0");
  if (!(beamwidth > 0.0 && beamwidth < kTwoPi)) throw Error("antenna: beamwidth must lie in (0, 2pi)");
  if (!std::isfinite(boresight)) throw Error("antenna: boresight must be finite");
  if (normalization_error() > 1e-9) throw Error("antenna: pattern is not power-normalized");
}

double gain_at(const AntennaPattern& pattern, double azimuth) noexcept {
  return angular_separation(azimuth, pattern.boresight) <= 0.5 * pattern.beamwidth ? pattern.main_gain
                                                                                   : pattern.side_gain;
}

void RadioParams::validate() const {
  if (!(carrier_hz > 0.0)) throw Error("radio: carrier_hz must be > 0");
  if (!(bandwidth_hz > 0.0)) throw Error("radio: bandwidth_hz must be > 0");
  if (!(tx_power_min_w >= 0.0) || !(tx_power_min_w <= tx_power_max_w))
    throw Error("radio: require 0 <= tx_power_min_w <= tx_power_max_w");
  if (!(pathloss_exponent >= 2.0)) throw Error("radio: pathloss_exponent must be >= 2");
  if (!(target_rx_power_w > 0.0)) throw Error("radio: target_rx_power_w must be > 0");
  if (!(reference_distance_m > 0.0)) throw Error("radio: reference_distance_m must be > 0");
  if (!std::isfinite(noise_figure_db)) throw Error("radio: noise_figure_db must be finite");
}

double RadioParams::noise_power_w() const noexcept {
  return kBoltzmann * kReferenceTemperature * bandwidth_hz * db_to_linear(noise_figure_db);
}

double pathloss_db(const RadioParams& params, double distance_m) {
  if (!(distance_m > 0.0)) throw Error("invalid distance");
  const double d_ref = params.reference_distance_m;
  const double d = std::max(distance_m, d_ref);
  const double anchor = 20.0 * std::log10(kFourPi * d_ref * params.carrier_hz / kSpeedOfLight);
  return anchor + 10.0 * params.pathloss_exponent * std::log10(d / d_ref);
}

double excess_attenuation(const RadioParams& params, double distance_m) noexcept {
  const double excess = params.pathloss_exponent - 2.0;
  if (excess == 0.0) return 1.0;
  const double d = std::max(distance_m, params.reference_distance_m);
  return std::pow(params.reference_distance_m / d, excess);
}

LinkBudget link_budget(const RadioParams& params, const AntennaPattern& tx_pattern,
                       const AntennaPattern& rx_pattern, const Point2D& tx_pos,
                       const Point2D& rx_pos, double tx_power_w) {
  if (!(tx_power_w >= 0.0) || !std::isfinite(tx_power_w)) throw Error("link budget: tx power must be >= 0");
  LinkBudget lb;
  lb.tx_gain = gain_at(tx_pattern, azimuth(tx_pos, rx_pos));
  lb.rx_gain = gain_at(rx_pattern, azimuth(rx_pos, tx_pos));

  const double d2 = squared_distance(tx_pos, rx_pos);
  const double d_ref = params.reference_distance_m;
  lb.distance_m = std::sqrt(d2);
  lb.pathloss_db = pathloss_db(params, lb.distance_m);
  lb.rx_power_w = tx_power_w * lb.tx_gain * lb.rx_gain / db_to_linear(lb.pathloss_db);

  // Same arithmetic as kernels::point_source_pd so batched and single-link
  // evaluations agree bit for bit.
  const double clamped_d2 = std::max(d2, d_ref * d_ref);
  lb.incident_pd_w_m2 = (tx_power_w * lb.tx_gain) / (kFourPi * clamped_d2) *
                        excess_attenuation(params, lb.distance_m);
  lb.snr = lb.rx_power_w / params.noise_power_w();
  return lb;
}

double uplink_power_control(const RadioParams& params, double pathloss_db, double tx_gain,
                            double rx_gain) {
  if (!(tx_gain > 0.0) || !(rx_gain > 0.0)) throw Error("power control: gains must be > 0");
  const double required = params.target_rx_power_w * db_to_linear(pathloss_db) / (tx_gain * rx_gain);
  return std::clamp(required, params.tx_power_min_w, params.tx_power_max_w);
}

double achievable_rate(double snr, double bandwidth_hz) {
  if (!(snr >= 0.0)) throw Error("achievable rate: snr must be >= 0");
  return bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace emf
