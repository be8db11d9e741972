#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "emf/dosimetry.hpp"
#include "emf/profile.hpp"
#include "emf/topology.hpp"

namespace emf {

/// Quantity minimized when choosing the uplink BS. For a fixed UE all three
/// are proportional, so they select the same BS; they differ only in what is
/// logged and compared against thresholds.
enum class EmissionMetric { sar, pd, eirp };

std::string_view to_string(EmissionMetric m) noexcept;
EmissionMetric parse_emission_metric(std::string_view s);

struct ProtocolSettings {
  double uplink_snr_floor = 0.0;         // linear
  double downlink_rate_floor_bps = 0.0;  // at the BS reference power
  double hysteresis_w_kg = 0.0;          // minimum SAR improvement for a handover
  EmissionMetric metric = EmissionMetric::sar;
  double device_head_distance_m = 0.05;
};

/// Immutable inputs shared by every protocol decision in one trial.
struct Scene {
  const Topology& topology;
  const TechnologyProfile& profile;
  const TissueModel& tissue;
  const ExposureLimits& limits;
  const ProtocolSettings& settings;
};

/// What the UE would radiate toward its own head if served by `bs`.
struct UplinkPrediction {
  std::size_t bs = 0;
  double distance_m = 0.0;
  double pathloss_db = 0.0;
  double tx_power_w = 0.0;  // after power control
  double head_gain = 0.0;
  double eirp_toward_head_w = 0.0;
  double pd_w_m2 = 0.0;
  double sar_w_kg = 0.0;

  double emission(EmissionMetric m) const noexcept;
};

/// Uplink SNR toward `bs` with the UE power set by power control (capped at max).
double uplink_snr(const Topology& topology, std::size_t ue, std::size_t bs, const TechnologyProfile& profile);

/// BSs whose uplink SNR meets `snr_floor`, nearest first, ties by id.
std::vector<std::size_t> candidate_set(const Topology& topology, std::size_t ue,
                                       const TechnologyProfile& profile, double snr_floor);

UplinkPrediction predict_uplink(const Scene& scene, std::size_t ue, std::size_t bs);

/// Predicted surface SAR (W/kg) at the user's head when served by `bs`.
double predicted_uplink_emission(const Scene& scene, std::size_t ue, std::size_t bs);

/// Argmin of the configured emission metric over `candidates`, lower id on ties.
std::size_t select_min_emission(const Scene& scene, std::size_t ue, const std::vector<std::size_t>& candidates);

enum class DecisionCause { initial, sar_trigger, downlink_exposure };

std::string_view to_string(DecisionCause c) noexcept;

struct HandoverDecision {
  std::size_t ue = 0;
  std::size_t from_bs = 0;
  std::size_t to_bs = 0;
  DecisionCause cause = DecisionCause::initial;
  double predicted_sar_before = 0.0;
  double predicted_sar_after = 0.0;
  std::size_t candidates_evaluated = 0;

  friend bool operator==(const HandoverDecision&, const HandoverDecision&) = default;
};

struct AssociationState {
  std::vector<std::size_t> serving_bs;
  std::vector<double> ue_tx_power_w;
  std::vector<std::uint8_t> trigger_active;
  std::vector<std::uint8_t> outage;         // trigger fired but no BS met the SNR floor
  std::vector<std::uint8_t> noncompliant;   // uplink SAR still above the regulatory limit
  std::vector<HandoverDecision> decision_log;

  void validate(const Topology& topology, const TechnologyProfile& profile) const;
  friend bool operator==(const AssociationState&, const AssociationState&) = default;
};

/// Index of the BS closest to `ue`, lower id on ties.
std::size_t nearest_bs(const Topology& topology, std::size_t ue);

/// Nearest-BS attachment with power-controlled UE power; logs one `initial` decision per UE.
AssociationState initial_association(const Scene& scene);

struct StepResult {
  AssociationState state;
  std::vector<HandoverDecision> decisions;
};

/// One evaluation of the SAR trigger for every UE. A triggered UE is moved to
/// the minimum-emission BS; its transmit power is never backed off below the
/// power-control value.
StepResult step_uplink(const AssociationState& state, const Scene& scene);

/// Instantaneous transmit state of every BS. A BS that is switched off
/// (`enabled[b] == 0`) radiates nothing and cannot be selected; an enabled BS
/// with zero power is idle and may still be chosen to serve.
struct DownlinkBeams {
  std::vector<AntennaPattern> patterns;
  std::vector<double> powers_w;
  std::vector<std::uint8_t> enabled;
};

/// Beams of all BSs while `ue` is being served: each BS points at the
/// lowest-id UE of its initial association other than `ue`, and stays silent
/// if it has none.
DownlinkBeams interferer_beams(const Topology& topology, const TechnologyProfile& profile,
                               const std::vector<std::size_t>& initial_serving, std::size_t ue);

/// `others` with BS `bs` steered at `ue` at the profile BS power.
DownlinkBeams with_serving_beam(DownlinkBeams others, const Topology& topology,
                                const TechnologyProfile& profile, std::size_t bs, std::size_t ue);

/// Downlink rate from `bs` to `ue` with both main lobes aligned at the profile BS power.
double downlink_reference_rate(const Topology& topology, std::size_t ue, std::size_t bs,
                               const TechnologyProfile& profile);

/// Exposure at `ue` if served by `bs` while every other BS keeps its beam in `others`.
ExposureReport downlink_exposure_if_served(const Scene& scene, std::size_t ue, std::size_t bs,
                                           const DownlinkBeams& others);

/// BS meeting `rate_floor_bps` that minimizes total downlink SAR at `ue`, lower id on ties.
std::size_t select_downlink(const Scene& scene, std::size_t ue, const DownlinkBeams& others,
                            double rate_floor_bps);

}  // namespace emf
