#pragma once

#include <string>
#include <vector>

#include "emf/radio.hpp"

namespace emf {

/// Radio and deployment parameters of one cellular generation.
struct TechnologyProfile {
  std::string name;
  RadioParams radio;
  double cell_radius_m = 0.0;
  unsigned bs_elements = 1;
  unsigned ue_elements = 1;
  double bs_tx_power_w = 0.0;
  double side_gain = 0.1;  // side-lobe floor of every sectored array

  void validate() const;

  AntennaPattern bs_pattern(double boresight = 0.0) const;
  AntennaPattern ue_pattern(double boresight = 0.0) const;

  friend bool operator==(const TechnologyProfile&, const TechnologyProfile&) = default;
};

/// Shipped generation presets: "5G", "4G", "3.9G".
TechnologyProfile preset(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace emf
