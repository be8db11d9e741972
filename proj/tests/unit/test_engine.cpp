#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "emf/engine.hpp"
#include "emf/error.hpp"
#include "oracles.hpp"

using namespace emf;

namespace {

TissueModel skin() { return TissueModel::load_table(std::string(EMF_DATA_DIR) + "/tissue/dry_skin.csv", 1100.0); }

std::vector<Scenario> all_presets() {
  std::vector<Scenario> out;
  for (const auto& n : preset_names()) out.push_back(default_scenario(n));
  return out;
}

}  // namespace

TEST_CASE("preset examples") {
  const TechnologyProfile g5 = preset("5G");
  CHECK(g5.radio.carrier_hz == 28e9);
  CHECK(g5.cell_radius_m == 200.0);
  const TechnologyProfile g4 = preset("4G");
  CHECK(g4.radio.carrier_hz == 2e9);
  CHECK(g4.cell_radius_m == 500.0);
  const TechnologyProfile g39 = preset("3.9G");
  CHECK(g39.radio.carrier_hz == 1.9e9);
  CHECK(g39.cell_radius_m == 1000.0);
  CHECK(g5.bs_elements == 64);
  CHECK(g4.bs_elements == 8);
  CHECK(g39.ue_elements == 1);
  CHECK(g5.bs_tx_power_w == 1.0);
  CHECK(g4.radio.bandwidth_hz == 20e6);
  for (const auto& n : preset_names()) CHECK_NOTHROW(preset(n).validate());
  CHECK_THROWS_WITH_AS(preset("6G"), "unknown technology '6G' (valid: 5G, 4G, 3.9G)", Error);
}

TEST_CASE("run_trial is deterministic") {
  const TissueModel t = skin();
  for (const auto& sc : all_presets()) {
    const TrialRecord a = run_trial(sc, t, 3, trial_seed(1, 3));
    const TrialRecord b = run_trial(sc, t, 3, trial_seed(1, 3));
    CHECK(a.topology == b.topology);
    CHECK(a.decisions == b.decisions);
    REQUIRE(a.ues.size() == b.ues.size());
    for (std::size_t u = 0; u < a.ues.size(); ++u) {
      CHECK(a.ues[u].uplink.sar_w_kg == b.ues[u].uplink.sar_w_kg);
      CHECK(a.ues[u].downlink.sar_w_kg == b.ues[u].downlink.sar_w_kg);
    }
    CHECK(a.summary.downlink_sar == b.summary.downlink_sar);
  }
}

TEST_CASE("zero BS power gives zero downlink exposure") {
  const TissueModel t = skin();
  Scenario sc = default_scenario("5G");
  sc.profile.bs_tx_power_w = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const TrialRecord r = run_trial(sc, t, i, trial_seed(2, i));
    for (const auto& u : r.ues) {
      CHECK(u.downlink.sar_w_kg == 0.0);
      CHECK(u.downlink.incident_pd_w_m2 == 0.0);
    }
  }
}

TEST_CASE("single BS at the centre matches the downlink exposure example") {
  const TissueModel t = skin();
  Scenario sc = default_scenario("5G");
  sc.profile.bs_elements = 12;  // main gain 10.9
  sc.profile.radio.pathloss_exponent = 2.0;
  Topology topo;
  topo.window = {0, 0, 2000, 2000};
  topo.bs_positions = {topo.window.center()};
  topo.ue_positions = {{topo.window.center().x + 100.0, topo.window.center().y}};
  topo.head_azimuth = {0.0};
  const TrialRecord r = evaluate_topology(sc, t, topo);
  REQUIRE(r.ues.size() == 1);
  const double want = 1.0 * 10.9 / (4.0 * std::numbers::pi * 1e4);
  CHECK(oracle::rel_err(r.ues[0].downlink.incident_pd_w_m2, want) < 1e-12);
  CHECK(r.ues[0].serving_link_pd_w_m2 == r.ues[0].downlink.incident_pd_w_m2);
  CHECK(std::fabs(r.ues[0].downlink.incident_pd_w_m2 - 8.67e-5) < 0.005e-5);
}

TEST_CASE("stored records reproduce offline") {
  const TissueModel t = skin();
  for (const auto& sc : all_presets()) {
    const ProtocolSettings ps = sc.effective_protocol();
    for (std::size_t i = 0; i < 10; ++i) {
      const TrialRecord r = run_trial(sc, t, i, trial_seed(4, i));
      REQUIRE_FALSE(r.skipped);
      const Topology& topo = r.topology;
      std::vector<std::size_t> initial;
      for (const auto& u : r.ues) initial.push_back(u.initial_bs);
      for (std::size_t u = 0; u < r.ues.size(); ++u) {
        const UeOutcome& o = r.ues[u];
        const AntennaPattern ue_beam =
            sc.profile.ue_pattern(azimuth(topo.ue_positions[u], topo.bs_positions[o.uplink_bs]));
        const ExposureReport ul = uplink_exposure(o.uplink_tx_power_w, ue_beam, topo.head_azimuth[u],
                                                  ps.device_head_distance_m, t, sc.profile.radio.carrier_hz, sc.limits);
        CHECK(oracle::rel_err(o.uplink.sar_w_kg, ul.sar_w_kg) < 1e-9);

        DownlinkBeams beams = interferer_beams(topo, sc.profile, initial, u);
        beams.patterns[o.downlink_bs] =
            sc.profile.bs_pattern(azimuth(topo.bs_positions[o.downlink_bs], topo.ue_positions[u]));
        beams.powers_w[o.downlink_bs] = sc.profile.bs_tx_power_w;
        const ExposureReport dl =
            downlink_exposure(topo, beams.patterns, beams.powers_w, sc.profile.radio, u, t, sc.limits);
        CHECK(oracle::rel_err(o.downlink.sar_w_kg, dl.sar_w_kg) < 1e-9);
        CHECK(oracle::rel_err(o.downlink.incident_pd_w_m2, dl.incident_pd_w_m2) < 1e-9);
      }
    }
  }
}

TEST_CASE("campaign is independent of parallelism") {
  const TissueModel t = skin();
  const CampaignResult a = run_campaign(all_presets(), t, 40, 7, 1);
  const CampaignResult b = run_campaign(all_presets(), t, 40, 7, 8);
  REQUIRE(a.technologies.size() == b.technologies.size());
  for (std::size_t i = 0; i < a.technologies.size(); ++i) {
    const auto& x = a.technologies[i];
    const auto& y = b.technologies[i];
    CHECK(x.uplink.sar.mean == y.uplink.sar.mean);
    CHECK(x.uplink.sar.std_error == y.uplink.sar.std_error);
    CHECK(x.downlink.sar.mean == y.downlink.sar.mean);
    CHECK(x.downlink.pd.ci_half_width == y.downlink.pd.ci_half_width);
    CHECK(x.uplink.handovers == y.uplink.handovers);
    for (std::size_t k = 0; k < x.records.size(); ++k) CHECK(x.records[k].decisions == y.records[k].decisions);
  }
}

TEST_CASE("single-trial statistics") {
  const TissueModel t = skin();
  const CampaignResult r = run_campaign({default_scenario("4G")}, t, 1, 3, 1);
  const TechnologyResult& tr = r.technologies[0];
  CHECK(tr.trials == 1);
  CHECK(tr.uplink.sar.mean == tr.records[0].summary.uplink_sar);
  CHECK(tr.uplink.sar.std_error == 0.0);
  CHECK(tr.uplink.sar.ci_half_width == 0.0);
}

TEST_CASE("estimate") {
  const Estimate e = estimate({1.0, 2.0, 3.0, 4.0});
  CHECK(e.mean == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(e.ci_half_width == doctest::Approx(1.96 * e.std_error));
  CHECK(estimate({}).mean == 0.0);
}

TEST_CASE("mean of trial means equals the pooled mean for equal UE counts") {
  const TissueModel t = skin();
  const CampaignResult r = run_campaign({default_scenario("5G")}, t, 30, 11, 2);
  const TechnologyResult& tr = r.technologies[0];
  double pooled = 0.0;
  std::size_t n = 0;
  for (const auto& rec : tr.records)
    for (const auto& u : rec.ues) {
      pooled += u.uplink.sar_w_kg;
      ++n;
    }
  CHECK(oracle::rel_err(tr.uplink.sar.mean, pooled / static_cast<double>(n)) < 1e-12);
}

TEST_CASE("standard error shrinks as one over root trials") {
  const TissueModel t = skin();
  const Scenario sc = default_scenario("4G");
  const double se1 = run_campaign({sc}, t, 400, 21, 4).technologies[0].uplink.sar.std_error;
  const double se4 = run_campaign({sc}, t, 1600, 21, 4).technologies[0].uplink.sar.std_error;
  CHECK(se1 / se4 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("skipped trials are counted and excluded") {
  const TissueModel t = skin();
  Scenario sc = default_scenario("5G");
  sc.deployment.window_factor = 0.3;  // tiny window: most PPP draws are empty
  const CampaignResult r = run_campaign({sc}, t, 50, 5, 1);
  const TechnologyResult& tr = r.technologies[0];
  CHECK(tr.trials == 50);
  CHECK(tr.skipped > 0);
  std::vector<double> kept;
  for (const auto& rec : tr.records) {
    if (rec.skipped) {
      CHECK_FALSE(rec.skip_reason.empty());
    } else {
      kept.push_back(rec.summary.uplink_sar);
    }
  }
  CHECK(kept.size() + tr.skipped == 50);
  CHECK(tr.uplink.sar.mean == estimate(kept).mean);
}

TEST_CASE("compare examples") {
  auto tech = [](const std::string& name, double ul, double ul_ci, double dl, double dl_ci) {
    TechnologyResult t;
    t.scenario.profile.name = name;
    t.uplink.sar = {ul, ul_ci / 1.96, ul_ci};
    t.downlink.sar = {dl, dl_ci / 1.96, dl_ci};
    return t;
  };
  CampaignResult r;
  r.technologies = {tech("3.9G", 0.05, 0.01, 1.0, 0.1), tech("5G", 0.9, 0.01, 1.05, 0.1), tech("4G", 0.1, 0.01, 0.5, 0.1)};
  const auto ranks = compare(r);
  REQUIRE(ranks.size() == 2);
  CHECK(ranks[0].direction == LinkDirection::uplink);
  CHECK(ranks[0].order == std::vector<std::string>{"5G", "4G", "3.9G"});
  CHECK(ranks[0].separated == std::vector<bool>{true, true});
  CHECK(ranks[1].order == std::vector<std::string>{"5G", "3.9G", "4G"});
  CHECK(ranks[1].separated == std::vector<bool>{false, true});

  CampaignResult one;
  one.technologies = {tech("5G", 1, 0, 1, 0)};
  CHECK_THROWS_AS(compare(one), Error);
}

TEST_CASE("campaign validation") {
  const TissueModel t = skin();
  CHECK_THROWS_AS(run_campaign(all_presets(), t, 0, 1, 1), Error);
  CHECK_THROWS_AS(run_campaign({}, t, 1, 1, 1), Error);
  Scenario bad = default_scenario("5G");
  bad.profile.radio.carrier_hz = 100e9;
  CHECK_THROWS_AS(run_campaign({bad}, t, 1, 1, 1), Error);
}
