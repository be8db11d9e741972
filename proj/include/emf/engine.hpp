#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emf/dosimetry.hpp"
#include "emf/profile.hpp"
#include "emf/protocol.hpp"
#include "emf/topology.hpp"

namespace emf {

struct DeploymentSettings {
  DeploymentMode mode = DeploymentMode::ppp;
  std::size_t ue_count = 10;
  /// The simulation window is a square of side window_factor * cell_radius
  /// with its corner at the origin.
  double window_factor = 10.0;

  friend bool operator==(const DeploymentSettings&, const DeploymentSettings&) = default;
};

struct ProtocolConfig {
  /// Unset link-quality floors default to the link quality at
  /// coverage_factor * cell_radius (main lobes aligned, UE at power-controlled
  /// power capped at max, BS at its nominal power).
  double coverage_factor = 2.0;
  std::optional<double> uplink_snr_floor;
  std::optional<double> downlink_rate_floor_bps;
  double hysteresis_w_kg = 0.0;
  EmissionMetric metric = EmissionMetric::sar;
  double device_head_distance_m = 0.05;

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

/// Everything needed to simulate one technology.
struct Scenario {
  TechnologyProfile profile;
  DeploymentSettings deployment;
  ProtocolConfig protocol;
  ExposureLimits limits;

  void validate() const;
  DeploymentConfig deployment_config(std::uint64_t seed) const;
  ProtocolSettings effective_protocol() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario default_scenario(const std::string& technology);

struct UeOutcome {
  std::size_t initial_bs = 0;
  std::size_t uplink_bs = 0;
  std::size_t downlink_bs = 0;
  double uplink_tx_power_w = 0.0;
  ExposureReport uplink;    // after the protocol
  ExposureReport downlink;  // after the protocol
  double baseline_uplink_sar_w_kg = 0.0;    // nearest-BS association, before the protocol
  double baseline_downlink_sar_w_kg = 0.0;
  double baseline_downlink_pd_w_m2 = 0.0;
  double serving_link_pd_w_m2 = 0.0;  // contribution of the downlink serving BS
  bool uplink_triggered = false;
  bool uplink_outage = false;
  bool downlink_outage = false;
};

struct TrialSummary {
  double uplink_sar = 0.0;  // means over UEs
  double uplink_pd = 0.0;
  double downlink_sar = 0.0;
  double downlink_pd = 0.0;
  double serving_link_pd = 0.0;
  double uplink_compliant = 0.0;  // fractions of UEs
  double downlink_compliant = 0.0;
  std::size_t uplink_handovers = 0;
  std::size_t downlink_switches = 0;
  std::size_t uplink_outages = 0;
  std::size_t downlink_outages = 0;
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool skipped = false;
  std::string skip_reason;
  Topology topology;
  std::vector<HandoverDecision> decisions;  // initial, sar_trigger and downlink_exposure
  std::vector<UeOutcome> ues;
  TrialSummary summary;
};

/// Seed of trial `index` under `master_seed`; shared by every technology.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) noexcept;

/// Sample a deployment, attach UEs to their nearest BS, run one uplink
/// protocol step and the downlink selection, and report the exposure of every UE.
TrialRecord run_trial(const Scenario& scenario, const TissueModel& tissue, std::size_t index, std::uint64_t seed);

/// Re-run the pipeline on a given topology. run_trial is sample_topology + this.
TrialRecord evaluate_topology(const Scenario& scenario, const TissueModel& tissue, Topology topology);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // zero when fewer than two samples
  double ci_half_width = 0.0;
};

/// Sample mean, standard error (n - 1 denominator) and 1.96-sigma half width.
Estimate estimate(const std::vector<double>& samples);

struct DirectionStats {
  Estimate sar;
  Estimate pd;
  double compliant_fraction = 0.0;
  std::size_t handovers = 0;
  std::size_t outages = 0;
};

struct TechnologyResult {
  Scenario scenario;
  ProtocolSettings effective;
  std::size_t trials = 0;
  std::size_t skipped = 0;
  DirectionStats uplink;
  DirectionStats downlink;
  Estimate serving_link_pd;
  std::vector<TrialRecord> records;
};

/// Statistics over the non-skipped records; trials and skipped are counted.
TechnologyResult summarize(const Scenario& scenario, std::vector<TrialRecord> records);

struct CampaignResult {
  std::uint64_t master_seed = 0;
  std::size_t trials = 0;
  std::vector<TechnologyResult> technologies;
};

CampaignResult run_campaign(const std::vector<Scenario>& scenarios, const TissueModel& tissue, std::size_t trials,
                            std::uint64_t master_seed, unsigned parallelism);

enum class LinkDirection { uplink, downlink };
std::string_view to_string(LinkDirection d) noexcept;

struct Ranking {
  LinkDirection direction = LinkDirection::uplink;
  std::vector<std::string> order;  // highest mean SAR first
  std::vector<double> mean_sar;
  std::vector<bool> separated;     // separated[i]: CIs of order[i] and order[i+1] do not overlap
};

std::vector<Ranking> compare(const CampaignResult& result);

}  // namespace emf
