#include "emf/profile.hpp"

#include "emf/error.hpp"

namespace emf {

void TechnologyProfile::validate() const {
  if (name.empty()) throw Error("profile: name must not be empty");
  radio.validate();
  if (!(cell_radius_m > 0.0)) throw Error("profile " + name + ": cell_radius_m must be > 0");
  if (bs_elements < 1 || ue_elements < 1) throw Error("profile " + name + ": element counts must be >= 1");
  if (!(bs_tx_power_w >= 0.0)) throw Error("profile " + name + ": bs_tx_power_w must be >= 0");
  if (!(side_gain > 0.0 && side_gain <= 1.0)) throw Error("profile " + name + ": side_gain must lie in (0, 1]");
}

AntennaPattern TechnologyProfile::bs_pattern(double boresight) const {
  return AntennaPattern::from_elements(bs_elements, side_gain, boresight);
}

AntennaPattern TechnologyProfile::ue_pattern(double boresight) const {
  return AntennaPattern::from_elements(ue_elements, side_gain, boresight);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"5G", "4G", "3.9G"};
  return names;
}

TechnologyProfile preset(const std::string& name) {
  // Carrier and cell radius define each generation. Array sizes, powers and
  // bandwidths are representative fill-ins.
  TechnologyProfile p;
  p.name = name;
  p.radio.tx_power_max_w = 0.2;   // 23 dBm handset
  p.radio.tx_power_min_w = 1e-4;  // -10 dBm
  p.radio.noise_figure_db = 7.0;
  p.radio.target_rx_power_w = 1e-7;
  p.radio.reference_distance_m = 1.0;
  p.side_gain = 0.1;
  if (name == "5G") {
    p.radio.carrier_hz = 28e9;
    p.radio.bandwidth_hz = 400e6;
    p.radio.pathloss_exponent = 2.5;
    p.cell_radius_m = 200.0;
    p.bs_elements = 64;
    p.ue_elements = 8;
    p.bs_tx_power_w = 1.0;
  } else if (name == "4G") {
    p.radio.carrier_hz = 2e9;
    p.radio.bandwidth_hz = 20e6;
    p.radio.pathloss_exponent = 2.0;
    p.cell_radius_m = 500.0;
    p.bs_elements = 8;
    p.ue_elements = 1;
    p.bs_tx_power_w = 10.0;
  } else if (name == "3.9G") {
    p.radio.carrier_hz = 1.9e9;
    p.radio.bandwidth_hz = 20e6;
    p.radio.pathloss_exponent = 2.0;
    p.cell_radius_m = 1000.0;
    p.bs_elements = 8;
    p.ue_elements = 1;
    p.bs_tx_power_w = 10.0;
  } else {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw Error("unknown technology '" + name + "' (valid: " + valid + ")");
  }
  return p;
}

}  // namespace emf
