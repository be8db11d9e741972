#include "emf/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emf/error.hpp"

namespace emf {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_ue(const Topology& topology, std::size_t ue) {
  if (ue >= topology.ue_count())
    throw Error("UE index " + std::to_string(ue) + " out of range [0, " + std::to_string(topology.ue_count()) + ")");
}

void check_bs(const Topology& topology, std::size_t bs) {
  if (bs >= topology.bs_count())
    throw Error("BS index " + std::to_string(bs) + " out of range [0, " + std::to_string(topology.bs_count()) + ")");
}

}  // namespace

std::string_view to_string(EmissionMetric m) noexcept {
  switch (m) {
    case EmissionMetric::pd: return "pd";
    case EmissionMetric::eirp: return "eirp";
    case EmissionMetric::sar: break;
  }
  return "sar";
}

EmissionMetric parse_emission_metric(std::string_view s) {
  if (s == "sar") return EmissionMetric::sar;
  if (s == "pd") return EmissionMetric::pd;
  if (s == "eirp") return EmissionMetric::eirp;
  throw Error("unknown emission metric '" + std::string(s) + "' (valid: sar, pd, eirp)");
}

std::string_view to_string(DecisionCause c) noexcept {
  switch (c) {
    case DecisionCause::sar_trigger: return "sar_trigger";
    case DecisionCause::downlink_exposure: return "downlink_exposure";
    case DecisionCause::initial: break;
  }
  return "initial";
}

double UplinkPrediction::emission(EmissionMetric m) const noexcept {
  switch (m) {
    case EmissionMetric::pd: return pd_w_m2;
    case EmissionMetric::eirp: return eirp_toward_head_w;
    case EmissionMetric::sar: break;
  }
  return sar_w_kg;
}

double uplink_snr(const Topology& topology, std::size_t ue, std::size_t bs, const TechnologyProfile& profile) {
  check_ue(topology, ue);
  check_bs(topology, bs);
  const RadioParams& radio = profile.radio;
  const double ue_gain = profile.ue_pattern().main_gain;
  const double bs_gain = profile.bs_pattern().main_gain;
  const double pl = pathloss_db(radio, distance(topology.ue_positions[ue], topology.bs_positions[bs]));
  const double power = uplink_power_control(radio, pl, ue_gain, bs_gain);
  return power * ue_gain * bs_gain / db_to_linear(pl) / radio.noise_power_w();
}

std::vector<std::size_t> candidate_set(const Topology& topology, std::size_t ue,
                                       const TechnologyProfile& profile, double snr_floor) {
  check_ue(topology, ue);
  if (topology.bs_count() == 0) throw Error("candidate set: empty topology");
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < topology.bs_count(); ++b)
    if (uplink_snr(topology, ue, b, profile) >= snr_floor) out.push_back(b);
  const Point2D u = topology.ue_positions[ue];
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    const double da = squared_distance(u, topology.bs_positions[a]);
    const double db = squared_distance(u, topology.bs_positions[b]);
    return da < db || (da == db && a < b);
  });
  return out;
}

UplinkPrediction predict_uplink(const Scene& scene, std::size_t ue, std::size_t bs) {
  const Topology& topo = scene.topology;
  check_ue(topo, ue);
  check_bs(topo, bs);
  const Point2D u = topo.ue_positions[ue];
  const Point2D b = topo.bs_positions[bs];
  const AntennaPattern ue_beam = scene.profile.ue_pattern(azimuth(u, b));
  const AntennaPattern bs_beam = scene.profile.bs_pattern(azimuth(b, u));

  UplinkPrediction p;
  p.bs = bs;
  p.distance_m = distance(u, b);
  p.pathloss_db = pathloss_db(scene.profile.radio, p.distance_m);
  p.tx_power_w = uplink_power_control(scene.profile.radio, p.pathloss_db, ue_beam.main_gain, bs_beam.main_gain);
  p.head_gain = gain_at(ue_beam, topo.head_azimuth[ue]);
  p.eirp_toward_head_w = p.tx_power_w * p.head_gain;

  const ExposureReport r = uplink_exposure(p.tx_power_w, ue_beam, topo.head_azimuth[ue],
                                           scene.settings.device_head_distance_m, scene.tissue,
                                           scene.profile.radio.carrier_hz, scene.limits);
  p.pd_w_m2 = r.incident_pd_w_m2;
  p.sar_w_kg = r.sar_w_kg;
  return p;
}

double predicted_uplink_emission(const Scene& scene, std::size_t ue, std::size_t bs) {
  return predict_uplink(scene, ue, bs).sar_w_kg;
}

std::size_t select_min_emission(const Scene& scene, std::size_t ue, const std::vector<std::size_t>& candidates) {
  if (candidates.empty()) throw Error("no feasible BS");
  std::size_t best = candidates.front();
  double best_value = predict_uplink(scene, ue, best).emission(scene.settings.metric);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const std::size_t bs = candidates[i];
    const double v = predict_uplink(scene, ue, bs).emission(scene.settings.metric);
    if (v < best_value || (v == best_value && bs < best)) {
      best = bs;
      best_value = v;
    }
  }
  return best;
}

void AssociationState::validate(const Topology& topology, const TechnologyProfile& profile) const {
  const std::size_t n = topology.ue_count();
  if (serving_bs.size() != n || ue_tx_power_w.size() != n || trigger_active.size() != n ||
      outage.size() != n || noncompliant.size() != n)
    throw Error("association state: per-UE vectors do not match the topology");
  for (std::size_t u = 0; u < n; ++u) {
    check_bs(topology, serving_bs[u]);
    const double p = ue_tx_power_w[u];
    if (!(p >= profile.radio.tx_power_min_w && p <= profile.radio.tx_power_max_w))
      throw Error("association state: UE power outside the profile range");
  }
}

std::size_t nearest_bs(const Topology& topology, std::size_t ue) {
  check_ue(topology, ue);
  if (topology.bs_count() == 0) throw Error("empty deployment");
  const Point2D u = topology.ue_positions[ue];
  std::size_t best = 0;
  double best_d2 = squared_distance(u, topology.bs_positions[0]);
  for (std::size_t b = 1; b < topology.bs_count(); ++b) {
    const double d2 = squared_distance(u, topology.bs_positions[b]);
    if (d2 < best_d2) {
      best = b;
      best_d2 = d2;
    }
  }
  return best;
}

AssociationState initial_association(const Scene& scene) {
  const std::size_t n = scene.topology.ue_count();
  AssociationState s;
  s.serving_bs.resize(n);
  s.ue_tx_power_w.resize(n);
  s.trigger_active.assign(n, 0);
  s.outage.assign(n, 0);
  s.noncompliant.assign(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t bs = nearest_bs(scene.topology, u);
    const UplinkPrediction p = predict_uplink(scene, u, bs);
    s.serving_bs[u] = bs;
    s.ue_tx_power_w[u] = p.tx_power_w;
    s.noncompliant[u] = p.sar_w_kg > scene.limits.sar_limit_w_kg;
    s.decision_log.push_back({u, bs, bs, DecisionCause::initial, p.sar_w_kg, p.sar_w_kg, 1});
  }
  return s;
}

StepResult step_uplink(const AssociationState& state, const Scene& scene) {
  state.validate(scene.topology, scene.profile);
  StepResult out{state, {}};
  AssociationState& next = out.state;
  const Topology& topo = scene.topology;

  for (std::size_t u = 0; u < topo.ue_count(); ++u) {
    const std::size_t serving = state.serving_bs[u];
    const AntennaPattern beam = scene.profile.ue_pattern(azimuth(topo.ue_positions[u], topo.bs_positions[serving]));
    const double before = uplink_exposure(state.ue_tx_power_w[u], beam, topo.head_azimuth[u],
                                          scene.settings.device_head_distance_m, scene.tissue,
                                          scene.profile.radio.carrier_hz, scene.limits)
                              .sar_w_kg;

    next.outage[u] = 0;
    if (!(before > scene.limits.sar_trigger_w_kg)) {
      next.trigger_active[u] = 0;
      next.noncompliant[u] = before > scene.limits.sar_limit_w_kg;
      continue;
    }
    next.trigger_active[u] = 1;

    const std::vector<std::size_t> candidates =
        candidate_set(topo, u, scene.profile, scene.settings.uplink_snr_floor);
    if (candidates.empty()) {
      next.outage[u] = 1;
      next.noncompliant[u] = 1;
      continue;
    }

    const std::size_t chosen = select_min_emission(scene, u, candidates);
    const UplinkPrediction after = predict_uplink(scene, u, chosen);
    if (chosen != serving && before - after.sar_w_kg > scene.settings.hysteresis_w_kg) {
      const HandoverDecision d{u, serving, chosen, DecisionCause::sar_trigger, before, after.sar_w_kg,
                               candidates.size()};
      next.serving_bs[u] = chosen;
      next.ue_tx_power_w[u] = after.tx_power_w;
      next.noncompliant[u] = after.sar_w_kg > scene.limits.sar_limit_w_kg;
      next.decision_log.push_back(d);
      out.decisions.push_back(d);
    } else {
      next.noncompliant[u] = before > scene.limits.sar_limit_w_kg;
    }
  }
  return out;
}

DownlinkBeams interferer_beams(const Topology& topology, const TechnologyProfile& profile,
                               const std::vector<std::size_t>& initial_serving, std::size_t ue) {
  check_ue(topology, ue);
  if (initial_serving.size() != topology.ue_count()) throw Error("interferer beams: one serving BS per UE required");
  const std::size_t n = topology.bs_count();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> anchor(n, kNone);
  for (std::size_t u = 0; u < initial_serving.size(); ++u) {
    const std::size_t b = initial_serving[u];
    check_bs(topology, b);
    if (u != ue && anchor[b] == kNone) anchor[b] = u;
  }
  DownlinkBeams beams;
  beams.patterns.reserve(n);
  beams.powers_w.reserve(n);
  beams.enabled.assign(n, 1);
  for (std::size_t b = 0; b < n; ++b) {
    if (anchor[b] == kNone) {
      beams.patterns.push_back(profile.bs_pattern(0.0));
      beams.powers_w.push_back(0.0);
    } else {
      beams.patterns.push_back(profile.bs_pattern(azimuth(topology.bs_positions[b], topology.ue_positions[anchor[b]])));
      beams.powers_w.push_back(profile.bs_tx_power_w);
    }
  }
  return beams;
}

DownlinkBeams with_serving_beam(DownlinkBeams others, const Topology& topology,
                                const TechnologyProfile& profile, std::size_t bs, std::size_t ue) {
  check_ue(topology, ue);
  check_bs(topology, bs);
  if (others.patterns.size() != topology.bs_count() || others.powers_w.size() != topology.bs_count() ||
      others.enabled.size() != topology.bs_count())
    throw Error("downlink beams: one beam, power and enable flag per BS required");
  if (!others.enabled[bs]) throw Error("downlink beams: BS " + std::to_string(bs) + " is switched off");
  others.patterns[bs] = profile.bs_pattern(azimuth(topology.bs_positions[bs], topology.ue_positions[ue]));
  others.powers_w[bs] = profile.bs_tx_power_w;
  return others;
}

double downlink_reference_rate(const Topology& topology, std::size_t ue, std::size_t bs,
                               const TechnologyProfile& profile) {
  check_ue(topology, ue);
  check_bs(topology, bs);
  const RadioParams& radio = profile.radio;
  const double pl = pathloss_db(radio, distance(topology.ue_positions[ue], topology.bs_positions[bs]));
  const double rx = profile.bs_tx_power_w * profile.bs_pattern().main_gain * profile.ue_pattern().main_gain /
                    db_to_linear(pl);
  return achievable_rate(rx / radio.noise_power_w(), radio.bandwidth_hz);
}

ExposureReport downlink_exposure_if_served(const Scene& scene, std::size_t ue, std::size_t bs,
                                           const DownlinkBeams& others) {
  DownlinkBeams beams = with_serving_beam(others, scene.topology, scene.profile, bs, ue);
  for (std::size_t b = 0; b < beams.powers_w.size(); ++b)
    if (!beams.enabled[b]) beams.powers_w[b] = 0.0;
  return downlink_exposure(scene.topology, beams.patterns, beams.powers_w, scene.profile.radio, ue, scene.tissue,
                           scene.limits);
}

std::size_t select_downlink(const Scene& scene, std::size_t ue, const DownlinkBeams& others,
                            double rate_floor_bps) {
  check_ue(scene.topology, ue);
  bool found = false;
  std::size_t best = 0;
  double best_sar = 0.0;
  if (others.enabled.size() != scene.topology.bs_count())
    throw Error("downlink beams: one enable flag per BS required");
  for (std::size_t b = 0; b < scene.topology.bs_count(); ++b) {
    if (!others.enabled[b]) continue;
    if (!(downlink_reference_rate(scene.topology, ue, b, scene.profile) >= rate_floor_bps)) continue;
    const double sar = downlink_exposure_if_served(scene, ue, b, others).sar_w_kg;
    if (!found || sar < best_sar) {
      found = true;
      best = b;
      best_sar = sar;
    }
  }
  if (!found) throw Error("no feasible BS");
  return best;
}

}  // namespace emf
