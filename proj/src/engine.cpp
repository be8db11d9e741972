#include "emf/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "emf/error.hpp"
#include "emf/rng.hpp"

namespace emf {

void Scenario::validate() const {
  profile.validate();
  limits.validate();
  if (deployment.ue_count < 1) throw Error("scenario " + profile.name + ": ue_count must be >= 1");
  if (!(deployment.window_factor > 0.0)) throw Error("scenario " + profile.name + ": window_factor must be > 0");
  if (!(protocol.coverage_factor > 0.0)) throw Error("scenario " + profile.name + ": coverage_factor must be > 0");
  if (protocol.uplink_snr_floor && !(*protocol.uplink_snr_floor >= 0.0))
    throw Error("scenario " + profile.name + ": uplink_snr_floor must be >= 0");
  if (protocol.downlink_rate_floor_bps && !(*protocol.downlink_rate_floor_bps >= 0.0))
    throw Error("scenario " + profile.name + ": downlink_rate_floor_bps must be >= 0");
  if (!(protocol.hysteresis_w_kg >= 0.0)) throw Error("scenario " + profile.name + ": hysteresis_w_kg must be >= 0");
  if (!(protocol.device_head_distance_m > 0.0))
    throw Error("scenario " + profile.name + ": device_head_distance_m must be > 0");
}

DeploymentConfig Scenario::deployment_config(std::uint64_t seed) const {
  DeploymentConfig c;
  const double side = deployment.window_factor * profile.cell_radius_m;
  c.window = {0.0, 0.0, side, side};
  c.mode = deployment.mode;
  c.cell_radius_m = profile.cell_radius_m;
  c.seed = seed;
  c.ue_count = deployment.ue_count;
  return c;
}

ProtocolSettings Scenario::effective_protocol() const {
  ProtocolSettings s;
  s.hysteresis_w_kg = protocol.hysteresis_w_kg;
  s.metric = protocol.metric;
  s.device_head_distance_m = protocol.device_head_distance_m;

  const RadioParams& radio = profile.radio;
  const double edge = protocol.coverage_factor * profile.cell_radius_m;
  const double pl = db_to_linear(pathloss_db(radio, edge));
  const double bs_gain = profile.bs_pattern().main_gain;
  const double ue_gain = profile.ue_pattern().main_gain;
  const double noise = radio.noise_power_w();

  if (protocol.uplink_snr_floor) {
    s.uplink_snr_floor = *protocol.uplink_snr_floor;
  } else {
    const double p = uplink_power_control(radio, linear_to_db(pl), ue_gain, bs_gain);
    s.uplink_snr_floor = p * ue_gain * bs_gain / pl / noise;
  }
  if (protocol.downlink_rate_floor_bps) {
    s.downlink_rate_floor_bps = *protocol.downlink_rate_floor_bps;
  } else {
    const double snr = profile.bs_tx_power_w * bs_gain * ue_gain / pl / noise;
    s.downlink_rate_floor_bps = achievable_rate(snr, radio.bandwidth_hz);
  }
  return s;
}

Scenario default_scenario(const std::string& technology) {
  Scenario s;
  s.profile = preset(technology);
  return s;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) noexcept {
  return derive_seed(master_seed, static_cast<std::uint64_t>(index));
}

namespace {

TrialSummary summarize_trial(const std::vector<UeOutcome>& ues, const std::vector<HandoverDecision>& decisions) {
  TrialSummary s;
  const double n = static_cast<double>(ues.size());
  for (const auto& u : ues) {
    s.uplink_sar += u.uplink.sar_w_kg;
    s.uplink_pd += u.uplink.incident_pd_w_m2;
    s.downlink_sar += u.downlink.sar_w_kg;
    s.downlink_pd += u.downlink.incident_pd_w_m2;
    s.serving_link_pd += u.serving_link_pd_w_m2;
    s.uplink_compliant += u.uplink.compliant ? 1.0 : 0.0;
    s.downlink_compliant += u.downlink.compliant ? 1.0 : 0.0;
    s.uplink_outages += u.uplink_outage ? 1 : 0;
    s.downlink_outages += u.downlink_outage ? 1 : 0;
  }
  s.uplink_sar /= n;
  s.uplink_pd /= n;
  s.downlink_sar /= n;
  s.downlink_pd /= n;
  s.serving_link_pd /= n;
  s.uplink_compliant /= n;
  s.downlink_compliant /= n;
  for (const auto& d : decisions) {
    if (d.cause == DecisionCause::sar_trigger) ++s.uplink_handovers;
    if (d.cause == DecisionCause::downlink_exposure) ++s.downlink_switches;
  }
  return s;
}

}  // namespace

TrialRecord evaluate_topology(const Scenario& scenario, const TissueModel& tissue, Topology topology) {
  TrialRecord rec;
  rec.seed = topology.seed_used;
  rec.topology = std::move(topology);
  const Topology& topo = rec.topology;
  const ProtocolSettings settings = scenario.effective_protocol();
  const Scene scene{topo, scenario.profile, tissue, scenario.limits, settings};
  const std::size_t n_ue = topo.ue_count();

  const AssociationState initial = initial_association(scene);
  rec.decisions = initial.decision_log;
  const StepResult step = step_uplink(initial, scene);
  rec.decisions.insert(rec.decisions.end(), step.decisions.begin(), step.decisions.end());

  rec.ues.resize(n_ue);
  for (std::size_t u = 0; u < n_ue; ++u) {
    UeOutcome& out = rec.ues[u];
    out.initial_bs = initial.serving_bs[u];
    out.baseline_uplink_sar_w_kg = initial.decision_log[u].predicted_sar_before;

    out.uplink_bs = step.state.serving_bs[u];
    out.uplink_tx_power_w = step.state.ue_tx_power_w[u];
    out.uplink_triggered = step.state.trigger_active[u] != 0;
    out.uplink_outage = step.state.outage[u] != 0;
    const AntennaPattern ue_beam =
        scenario.profile.ue_pattern(azimuth(topo.ue_positions[u], topo.bs_positions[out.uplink_bs]));
    out.uplink = uplink_exposure(out.uplink_tx_power_w, ue_beam, topo.head_azimuth[u], settings.device_head_distance_m,
                                 tissue, scenario.profile.radio.carrier_hz, scenario.limits);
  }

  std::vector<HandoverDecision> downlink_decisions;
  for (std::size_t u = 0; u < n_ue; ++u) {
    UeOutcome& out = rec.ues[u];
    const DownlinkBeams others = interferer_beams(topo, scenario.profile, initial.serving_bs, u);
    const ExposureReport baseline = downlink_exposure_if_served(scene, u, out.initial_bs, others);
    out.baseline_downlink_sar_w_kg = baseline.sar_w_kg;
    out.baseline_downlink_pd_w_m2 = baseline.incident_pd_w_m2;

    std::size_t feasible = 0;
    for (std::size_t b = 0; b < topo.bs_count(); ++b)
      if (downlink_reference_rate(topo, u, b, scenario.profile) >= settings.downlink_rate_floor_bps) ++feasible;

    out.downlink_bs = out.initial_bs;
    if (feasible == 0) {
      out.downlink_outage = true;
      out.downlink = baseline;
    } else {
      out.downlink_bs = select_downlink(scene, u, others, settings.downlink_rate_floor_bps);
      out.downlink = out.downlink_bs == out.initial_bs ? baseline
                                                       : downlink_exposure_if_served(scene, u, out.downlink_bs, others);
      if (out.downlink_bs != out.initial_bs)
        downlink_decisions.push_back({u, out.initial_bs, out.downlink_bs, DecisionCause::downlink_exposure,
                                      baseline.sar_w_kg, out.downlink.sar_w_kg, feasible});
    }
    out.serving_link_pd_w_m2 = out.downlink.per_source[out.downlink_bs].pd_w_m2;
  }
  rec.decisions.insert(rec.decisions.end(), downlink_decisions.begin(), downlink_decisions.end());
  rec.summary = summarize_trial(rec.ues, rec.decisions);
  return rec;
}

TrialRecord run_trial(const Scenario& scenario, const TissueModel& tissue, std::size_t index, std::uint64_t seed) {
  scenario.validate();
  Topology topo;
  try {
    topo = sample_topology(scenario.deployment_config(seed));
  } catch (const Error& e) {
    TrialRecord rec;
    rec.index = index;
    rec.seed = seed;
    rec.skipped = true;
    rec.skip_reason = e.what();
    return rec;
  }
  TrialRecord rec = evaluate_topology(scenario, tissue, std::move(topo));
  rec.index = index;
  rec.seed = seed;
  return rec;
}

Estimate estimate(const std::vector<double>& samples) {
  Estimate e;
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double v : samples) sum += v;
  e.mean = sum / n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  e.ci_half_width = 1.96 * e.std_error;
  return e;
}

TechnologyResult summarize(const Scenario& scenario, std::vector<TrialRecord> records) {
  TechnologyResult r;
  r.scenario = scenario;
  r.effective = scenario.effective_protocol();
  r.trials = records.size();
  std::vector<double> ul_sar, ul_pd, dl_sar, dl_pd, serving, ul_ok, dl_ok;
  for (const auto& rec : records) {
    if (rec.skipped) {
      ++r.skipped;
      continue;
    }
    const TrialSummary& s = rec.summary;
    ul_sar.push_back(s.uplink_sar);
    ul_pd.push_back(s.uplink_pd);
    dl_sar.push_back(s.downlink_sar);
    dl_pd.push_back(s.downlink_pd);
    serving.push_back(s.serving_link_pd);
    ul_ok.push_back(s.uplink_compliant);
    dl_ok.push_back(s.downlink_compliant);
    r.uplink.handovers += s.uplink_handovers;
    r.uplink.outages += s.uplink_outages;
    r.downlink.handovers += s.downlink_switches;
    r.downlink.outages += s.downlink_outages;
  }
  r.uplink.sar = estimate(ul_sar);
  r.uplink.pd = estimate(ul_pd);
  r.uplink.compliant_fraction = estimate(ul_ok).mean;
  r.downlink.sar = estimate(dl_sar);
  r.downlink.pd = estimate(dl_pd);
  r.downlink.compliant_fraction = estimate(dl_ok).mean;
  r.serving_link_pd = estimate(serving);
  r.records = std::move(records);
  return r;
}

CampaignResult run_campaign(const std::vector<Scenario>& scenarios, const TissueModel& tissue, std::size_t trials,
                            std::uint64_t master_seed, unsigned parallelism) {
  if (trials < 1) throw Error("campaign: trials must be >= 1");
  if (scenarios.empty()) throw Error("campaign: at least one scenario is required");
  for (const auto& s : scenarios) {
    s.validate();
    if (!tissue.covers(s.profile.radio.carrier_hz))
      throw Error("scenario " + s.profile.name + ": carrier outside tissue table");
  }

  const std::size_t jobs = scenarios.size() * trials;
  std::vector<std::vector<TrialRecord>> records(scenarios.size(), std::vector<TrialRecord>(trials));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t s = job / trials;
      const std::size_t t = job % trials;
      try {
        records[s][t] = run_trial(scenarios[s], tissue, t, trial_seed(master_seed, t));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs);
      }
    }
  };

  const unsigned threads = std::max(1u, parallelism);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  CampaignResult result;
  result.master_seed = master_seed;
  result.trials = trials;
  for (std::size_t s = 0; s < scenarios.size(); ++s)
    result.technologies.push_back(summarize(scenarios[s], std::move(records[s])));
  return result;
}

std::string_view to_string(LinkDirection d) noexcept { return d == LinkDirection::uplink ? "uplink" : "downlink"; }

std::vector<Ranking> compare(const CampaignResult& result) {
  if (result.technologies.size() < 2) throw Error("compare: at least two technologies are required");
  std::vector<Ranking> out;
  for (LinkDirection dir : {LinkDirection::uplink, LinkDirection::downlink}) {
    auto stats = [&](const TechnologyResult& t) -> const Estimate& {
      return dir == LinkDirection::uplink ? t.uplink.sar : t.downlink.sar;
    };
    std::vector<const TechnologyResult*> order;
    for (const auto& t : result.technologies) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(),
                     [&](const TechnologyResult* a, const TechnologyResult* b) { return stats(*a).mean > stats(*b).mean; });
    Ranking r;
    r.direction = dir;
    for (std::size_t i = 0; i < order.size(); ++i) {
      r.order.push_back(order[i]->scenario.profile.name);
      r.mean_sar.push_back(stats(*order[i]).mean);
      if (i + 1 < order.size()) {
        const Estimate& hi = stats(*order[i]);
        const Estimate& lo = stats(*order[i + 1]);
        r.separated.push_back(hi.mean - hi.ci_half_width > lo.mean + lo.ci_half_width);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace emf
