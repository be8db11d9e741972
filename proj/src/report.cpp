#include "emf/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "emf/error.hpp"

namespace emf {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

ordered_json estimate_json(const Estimate& e) {
  return {{"mean", e.mean}, {"stderr", e.std_error}, {"ci_half_width", e.ci_half_width}};
}

ordered_json direction_json(const DirectionStats& d) {
  return {{"sar_w_kg", estimate_json(d.sar)},
          {"pd_w_m2", estimate_json(d.pd)},
          {"compliant_fraction", d.compliant_fraction},
          {"handovers", d.handovers},
          {"outages", d.outages}};
}

ordered_json report_json(const ExposureReport& r) {
  ordered_json sources = ordered_json::array();
  for (const auto& s : r.per_source) sources.push_back({s.source, s.pd_w_m2});
  return {{"incident_pd_w_m2", r.incident_pd_w_m2},
          {"sar_w_kg", r.sar_w_kg},
          {"pd_limit_fraction", r.pd_limit_fraction},
          {"sar_limit_fraction", r.sar_limit_fraction},
          {"compliant", r.compliant},
          {"per_source", sources}};
}

ordered_json points_json(const std::vector<Point2D>& pts) {
  ordered_json a = ordered_json::array();
  for (const auto& p : pts) a.push_back({p.x, p.y});
  return a;
}

ordered_json trial_json(const TrialRecord& rec, RecordLevel level) {
  ordered_json j;
  j["index"] = rec.index;
  j["seed"] = rec.seed;
  j["skipped"] = rec.skipped;
  if (rec.skipped) {
    j["skip_reason"] = rec.skip_reason;
    return j;
  }
  const TrialSummary& s = rec.summary;
  j["summary"] = {{"uplink_sar_w_kg", s.uplink_sar},
                  {"uplink_pd_w_m2", s.uplink_pd},
                  {"downlink_sar_w_kg", s.downlink_sar},
                  {"downlink_pd_w_m2", s.downlink_pd},
                  {"serving_link_pd_w_m2", s.serving_link_pd},
                  {"uplink_compliant_fraction", s.uplink_compliant},
                  {"downlink_compliant_fraction", s.downlink_compliant},
                  {"uplink_handovers", s.uplink_handovers},
                  {"downlink_switches", s.downlink_switches},
                  {"uplink_outages", s.uplink_outages},
                  {"downlink_outages", s.downlink_outages}};
  if (level == RecordLevel::summary) return j;

  ordered_json decisions = ordered_json::array();
  for (const auto& d : rec.decisions) {
    decisions.push_back({{"ue", d.ue},
                         {"from_bs", d.from_bs},
                         {"to_bs", d.to_bs},
                         {"cause", std::string(to_string(d.cause))},
                         {"predicted_sar_before", d.predicted_sar_before},
                         {"predicted_sar_after", d.predicted_sar_after},
                         {"candidates_evaluated", d.candidates_evaluated}});
  }
  j["decisions"] = decisions;

  ordered_json ues = ordered_json::array();
  for (const auto& u : rec.ues) {
    ordered_json uj;
    uj["initial_bs"] = u.initial_bs;
    uj["uplink_bs"] = u.uplink_bs;
    uj["downlink_bs"] = u.downlink_bs;
    uj["uplink_tx_power_w"] = u.uplink_tx_power_w;
    uj["uplink_triggered"] = u.uplink_triggered;
    uj["uplink_outage"] = u.uplink_outage;
    uj["downlink_outage"] = u.downlink_outage;
    uj["baseline_uplink_sar_w_kg"] = u.baseline_uplink_sar_w_kg;
    uj["baseline_downlink_sar_w_kg"] = u.baseline_downlink_sar_w_kg;
    uj["baseline_downlink_pd_w_m2"] = u.baseline_downlink_pd_w_m2;
    uj["serving_link_pd_w_m2"] = u.serving_link_pd_w_m2;
    if (level == RecordLevel::full) {
      uj["uplink"] = report_json(u.uplink);
      uj["downlink"] = report_json(u.downlink);
    } else {
      uj["uplink"] = {{"incident_pd_w_m2", u.uplink.incident_pd_w_m2}, {"sar_w_kg", u.uplink.sar_w_kg},
                      {"compliant", u.uplink.compliant}};
      uj["downlink"] = {{"incident_pd_w_m2", u.downlink.incident_pd_w_m2}, {"sar_w_kg", u.downlink.sar_w_kg},
                        {"compliant", u.downlink.compliant}};
    }
    ues.push_back(uj);
  }
  j["ues"] = ues;

  if (level == RecordLevel::full) {
    const Topology& t = rec.topology;
    j["topology"] = {{"window", {t.window.x_min, t.window.y_min, t.window.width, t.window.height}},
                     {"seed_used", t.seed_used},
                     {"bs_attempts", t.bs_attempts},
                     {"bs_positions", points_json(t.bs_positions)},
                     {"ue_positions", points_json(t.ue_positions)},
                     {"head_azimuth", t.head_azimuth}};
  }
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string summary_csv(const CampaignResult& result) {
  std::ostringstream out;
  out << "technology,direction,trials,skipped,mean_sar_w_kg,sar_stderr_w_kg,sar_ci_half_width_w_kg,"
         "mean_pd_w_m2,pd_stderr_w_m2,pd_ci_half_width_w_m2,compliant_fraction,handovers,outages,master_seed\n";
  for (const auto& t : result.technologies) {
    for (LinkDirection dir : {LinkDirection::uplink, LinkDirection::downlink}) {
      const DirectionStats& d = dir == LinkDirection::uplink ? t.uplink : t.downlink;
      out << t.scenario.profile.name << ',' << to_string(dir) << ',' << t.trials << ',' << t.skipped << ','
          << format_double(d.sar.mean) << ',' << format_double(d.sar.std_error) << ','
          << format_double(d.sar.ci_half_width) << ',' << format_double(d.pd.mean) << ','
          << format_double(d.pd.std_error) << ',' << format_double(d.pd.ci_half_width) << ','
          << format_double(d.compliant_fraction) << ',' << d.handovers << ',' << d.outages << ','
          << result.master_seed << '\n';
    }
  }
  return out.str();
}

std::string figure1_csv(const CampaignResult& result) {
  std::ostringstream out;
  out << "technology,direction,mean_sar_w_kg,ci_half_width\n";
  for (LinkDirection dir : {LinkDirection::downlink, LinkDirection::uplink}) {
    for (const auto& t : result.technologies) {
      const DirectionStats& d = dir == LinkDirection::uplink ? t.uplink : t.downlink;
      out << t.scenario.profile.name << ',' << to_string(dir) << ',' << format_double(d.sar.mean) << ','
          << format_double(d.sar.ci_half_width) << '\n';
    }
  }
  return out.str();
}

ordered_json run_record(const CampaignResult& result, const RunConfig& config) {
  ordered_json j;
  j["format"] = "emf-run-record/1";
  j["resolved_config"] = to_json(config);
  j["master_seed"] = result.master_seed;
  j["trials"] = result.trials;
  j["technologies"] = ordered_json::array();
  for (const auto& t : result.technologies) {
    ordered_json tj;
    tj["name"] = t.scenario.profile.name;
    tj["profile"] = to_json(t.scenario.profile);
    tj["effective_protocol"] = {{"uplink_snr_floor", t.effective.uplink_snr_floor},
                                {"downlink_rate_floor_bps", t.effective.downlink_rate_floor_bps},
                                {"hysteresis_w_kg", t.effective.hysteresis_w_kg},
                                {"emission_metric", std::string(to_string(t.effective.metric))},
                                {"device_head_distance_m", t.effective.device_head_distance_m}};
    tj["trials"] = t.trials;
    tj["skipped"] = t.skipped;
    tj["statistics"] = {{"uplink", direction_json(t.uplink)},
                        {"downlink", direction_json(t.downlink)},
                        {"serving_link_pd_w_m2", estimate_json(t.serving_link_pd)}};
    ordered_json trials = ordered_json::array();
    for (const auto& rec : t.records) trials.push_back(trial_json(rec, config.record_level));
    tj["trial_records"] = std::move(trials);
    j["technologies"].push_back(std::move(tj));
  }
  return j;
}

void write_outputs(const CampaignResult& result, const RunConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_file(dir / "summary.csv", summary_csv(result));
  write_file(dir / "figure1_data.csv", figure1_csv(result));
  write_file(dir / "run_record.json", run_record(result, config).dump(1) + "\n");
}

std::string explain(const RunConfig& config, const std::string& technology, std::size_t trial, std::size_t ue) {
  const Scenario scenario = config.scenario(technology);
  if (trial >= config.trials)
    throw Error("trial index " + std::to_string(trial) + " out of range [0, " + std::to_string(config.trials) + ")");
  if (ue >= scenario.deployment.ue_count)
    throw Error("ue_index " + std::to_string(ue) + " out of range [0, " + std::to_string(scenario.deployment.ue_count) +
                ")");
  const TissueModel tissue = config.load_tissue();
  const std::uint64_t seed = trial_seed(config.master_seed, trial);
  const TrialRecord rec = run_trial(scenario, tissue, trial, seed);

  std::ostringstream out;
  out << "technology " << technology << ", trial " << trial << ", seed " << seed << ", ue " << ue << '\n';
  if (rec.skipped) {
    out << "trial skipped: " << rec.skip_reason << '\n';
    return out.str();
  }

  const Topology& topo = rec.topology;
  const ProtocolSettings settings = scenario.effective_protocol();
  const Scene scene{topo, scenario.profile, tissue, scenario.limits, settings};
  const UeOutcome& o = rec.ues[ue];
  const UplinkPrediction current = predict_uplink(scene, ue, o.initial_bs);

  out << "ue position (" << format_double(topo.ue_positions[ue].x) << ", " << format_double(topo.ue_positions[ue].y)
      << ") m, head azimuth " << format_double(topo.head_azimuth[ue]) << " rad\n";
  out << "uplink: serving BS " << o.initial_bs << " (nearest), tx power " << format_double(current.tx_power_w)
      << " W, predicted SAR " << format_double(current.sar_w_kg) << " W/kg, trigger "
      << format_double(scenario.limits.sar_trigger_w_kg) << " W/kg\n";

  if (!(current.sar_w_kg > scenario.limits.sar_trigger_w_kg)) {
    out << "  no trigger; serving BS retained\n";
  } else {
    const auto candidates = candidate_set(topo, ue, scenario.profile, settings.uplink_snr_floor);
    out << "  trigger fired; candidate set (uplink SNR floor " << format_double(settings.uplink_snr_floor) << "): "
        << candidates.size() << " BS\n";
    out << "  bs,distance_m,tx_power_w,head_gain,predicted_" << to_string(settings.metric) << ",predicted_sar_w_kg\n";
    for (std::size_t b : candidates) {
      const UplinkPrediction p = predict_uplink(scene, ue, b);
      out << "  " << b << ',' << format_double(p.distance_m) << ',' << format_double(p.tx_power_w) << ','
          << format_double(p.head_gain) << ',' << format_double(p.emission(settings.metric)) << ','
          << format_double(p.sar_w_kg) << '\n';
    }
    if (candidates.empty()) {
      out << "  no feasible BS; uplink outage, serving BS retained\n";
    } else {
      const std::size_t best = select_min_emission(scene, ue, candidates);
      const UplinkPrediction p = predict_uplink(scene, ue, best);
      out << "  argmin: BS " << best << " (predicted SAR " << format_double(p.sar_w_kg) << " W/kg)\n";
      if (o.uplink_bs != o.initial_bs)
        out << "  handover: BS " << o.initial_bs << " -> BS " << o.uplink_bs << '\n';
      else
        out << "  serving BS is the argmin or no strict improvement; serving BS retained\n";
    }
  }
  out << "uplink result: BS " << o.uplink_bs << ", SAR " << format_double(o.uplink.sar_w_kg) << " W/kg, PD "
      << format_double(o.uplink.incident_pd_w_m2) << " W/m^2" << (o.uplink.compliant ? "" : ", NON-COMPLIANT")
      << '\n';

  out << "downlink: rate floor " << format_double(settings.downlink_rate_floor_bps) << " bit/s, baseline BS "
      << o.initial_bs << " SAR " << format_double(o.baseline_downlink_sar_w_kg) << " W/kg\n";
  const DownlinkBeams others = interferer_beams(topo, scenario.profile,
                                                [&] {
                                                  std::vector<std::size_t> init;
                                                  for (const auto& u : rec.ues) init.push_back(u.initial_bs);
                                                  return init;
                                                }(),
                                                ue);
  out << "  bs,reference_rate_bps,total_sar_w_kg\n";
  for (std::size_t b = 0; b < topo.bs_count(); ++b) {
    const double rate = downlink_reference_rate(topo, ue, b, scenario.profile);
    if (!(rate >= settings.downlink_rate_floor_bps)) continue;
    out << "  " << b << ',' << format_double(rate) << ','
        << format_double(downlink_exposure_if_served(scene, ue, b, others).sar_w_kg) << '\n';
  }
  out << "downlink result: BS " << o.downlink_bs << (o.downlink_outage ? " (outage: no BS meets the rate floor)" : "")
      << ", SAR " << format_double(o.downlink.sar_w_kg) << " W/kg, PD " << format_double(o.downlink.incident_pd_w_m2)
      << " W/m^2\n";
  return out.str();
}

}  // namespace emf
