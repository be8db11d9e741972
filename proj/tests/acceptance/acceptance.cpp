// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>

#include "emf/engine.hpp"
#include "emf/report.hpp"
#include "emf/rng.hpp"
#include "oracles.hpp"

using namespace emf;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

TissueModel skin() { return TissueModel::load_table(std::string(EMF_DATA_DIR) + "/tissue/dry_skin.csv", 1100.0); }

std::vector<Scenario> presets() {
  std::vector<Scenario> out;
  for (const auto& n : preset_names()) out.push_back(default_scenario(n));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " > ") + x;
  return s;
}

// Plane-wave depth and transmittance with std::complex<long double>.
void complex_reference(const DielectricRow& r, long double& depth, long double& trans) {
  const std::complex<long double> eps(r.eps_real, -r.eps_imag);
  const std::complex<long double> n = std::sqrt(eps);
  const long double k0 = 2.0L * oracle::kPi * r.frequency_hz / oracle::kC;
  depth = 1.0L / (2.0L * k0 * std::fabs(n.imag()));
  const std::complex<long double> gamma = (1.0L - n) / (1.0L + n);
  trans = 1.0L - std::norm(gamma);
}

void criterion1(const TissueModel& tissue) {
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignResult r = run_campaign(presets(), tissue, 1000, 1, 4);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto ranks = compare(r);
  const std::vector<std::string> want{"5G", "4G", "3.9G"};
  bool ok = secs < 60.0;
  std::string detail;
  for (const Ranking& rk : ranks) {
    const bool sep = !rk.separated.empty() && rk.separated[0];
    ok = ok && rk.order == want && sep;
    detail += std::string(to_string(rk.direction)) + " " + join(rk.order) + (sep ? " [5G/4G separated]" : " [overlap]") + "; ";
  }
  detail += fmt("%.2f s", secs);
  verdict(1, ok, "1000-trial SAR ranking 5G > 4G > 3.9G in both directions, 5G/4G CIs separated, < 60 s", detail);
}

void criterion2(const TissueModel& tissue) {
  double worst = 0.0;
  for (const DielectricRow& row : tissue.rows()) {
    long double depth, trans;
    complex_reference(row, depth, trans);
    worst = std::max(worst, oracle::rel_err(penetration_depth(tissue, row.frequency_hz), static_cast<double>(depth)));
    worst = std::max(worst, oracle::rel_err(transmittance(tissue, row.frequency_hz), static_cast<double>(trans)));
    worst = std::max(worst, oracle::rel_err(penetration_depth(tissue, row.frequency_hz),
                                            static_cast<double>(oracle::penetration_depth(row.eps_real, row.eps_imag,
                                                                                          row.frequency_hz))));
  }
  const double d28 = penetration_depth(tissue, 28e9), d2 = penetration_depth(tissue, 2e9);
  verdict(2, worst < 1e-10 && d28 < d2, "dosimetry matches complex plane-wave reference on every table row",
          fmt("max rel err %.3g", worst) + fmt(", depth(28 GHz) %.4g m", d28) + fmt(" < depth(2 GHz) %.4g m", d2));
}

void criterion3() {
  RadioParams r;
  r.pathloss_exponent = 2.0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double f = 1e8 * std::pow(1e3, i / 99.0);  // 100 MHz .. 100 GHz
    r.carrier_hz = f;
    for (int k = 0; k < 100; ++k) {
      const double d = std::pow(1e4, k / 99.0);  // 1 m .. 10 km
      worst = std::max(worst, std::fabs(pathloss_db(r, d) - static_cast<double>(oracle::friis_db(f, d))));
    }
  }
  verdict(3, worst < 1e-6, "n = 2 path loss equals 20 log10(4 pi d f / c) on a 100 x 100 (f, d) grid",
          fmt("max |error| %.3g dB", worst));
}

void criterion4(const TissueModel& tissue) {
  Scenario sc = default_scenario("5G");
  sc.protocol.uplink_snr_floor = 0.0;
  const ProtocolSettings settings = sc.effective_protocol();
  std::size_t trials = 0, checked = 0, mismatches = 0, handovers = 0, worsened = 0, not_idempotent = 0;
  for (std::uint64_t i = 0; trials < 500; ++i) {
    const Topology topo = sample_topology(sc.deployment_config(trial_seed(4, i)));
    if (topo.bs_count() < 10) continue;
    ++trials;
    const Scene scene{topo, sc.profile, tissue, sc.limits, settings};
    for (std::size_t u = 0; u < topo.ue_count(); ++u) {
      const auto cands = candidate_set(topo, u, sc.profile, settings.uplink_snr_floor);
      const std::size_t want =
          oracle::brute_argmin(cands, [&](std::size_t b) { return predicted_uplink_emission(scene, u, b); });
      ++checked;
      if (select_min_emission(scene, u, cands) != want) ++mismatches;
    }
    const StepResult first = step_uplink(initial_association(scene), scene);
    for (const auto& d : first.decisions) {
      ++handovers;
      if (!(d.predicted_sar_after <= d.predicted_sar_before)) ++worsened;
    }
    const StepResult second = step_uplink(first.state, scene);
    if (!second.decisions.empty() || second.state.serving_bs != first.state.serving_bs) ++not_idempotent;
  }
  verdict(4, mismatches == 0 && worsened == 0 && not_idempotent == 0 && handovers > 0,
          "argmin equals brute force, handovers never worsen SAR, step_uplink idempotent (500 trials, >= 10 BS)",
          std::to_string(checked) + " selections, " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(handovers) + " handovers, " + std::to_string(worsened) + " worsened, " +
              std::to_string(not_idempotent) + " non-idempotent");
}

void criterion5(const TissueModel& tissue) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Engine eng(derive_seed(5, 0));
  double worst_norm = 0.0;
  for (int i = 0; i < 100; ++i) {
    AntennaPattern p = i % 2 == 0
                           ? AntennaPattern::sectored(uniform(eng, 0.01, two_pi - 0.01), uniform(eng, 0.001, 1.0),
                                                      uniform(eng, 0.0, two_pi))
                           : AntennaPattern::from_elements(1 + static_cast<unsigned>(uniform(eng, 0, 256)),
                                                           uniform(eng, 0.001, 1.0), uniform(eng, 0.0, two_pi));
    const double integral = oracle::riemann_circle([&](double a) { return gain_at(p, a); },
                                                   {p.boresight - p.beamwidth / 2, p.boresight + p.beamwidth / 2}, 4096);
    worst_norm = std::max(worst_norm, oracle::rel_err(integral, two_pi));
  }

  double worst_lin = 0.0;
  const RadioParams radio = preset("5G").radio;
  const ExposureLimits limits;
  for (int i = 0; i < 100; ++i) {
    const double k = uniform(eng, 0.01, 100.0);
    const AntennaPattern ue = AntennaPattern::from_elements(8, 0.1, uniform(eng, 0.0, two_pi));
    const double head = uniform(eng, 0.0, two_pi);
    const double p = uniform(eng, 1e-4, 0.2);
    const ExposureReport a = uplink_exposure(p, ue, head, 0.05, tissue, radio.carrier_hz, limits);
    const ExposureReport b = uplink_exposure(k * p, ue, head, 0.05, tissue, radio.carrier_hz, limits);
    worst_lin = std::max({worst_lin, oracle::rel_err(b.sar_w_kg, k * a.sar_w_kg),
                          oracle::rel_err(b.incident_pd_w_m2, k * a.incident_pd_w_m2)});

    Topology topo;
    topo.window = {0, 0, 1000, 1000};
    std::vector<AntennaPattern> beams;
    std::vector<double> powers, scaled;
    for (int s = 0; s < 8; ++s) {
      topo.bs_positions.push_back({uniform(eng, 0, 1000), uniform(eng, 0, 1000)});
      beams.push_back(AntennaPattern::from_elements(64, 0.1, uniform(eng, 0.0, two_pi)));
      powers.push_back(uniform(eng, 0.1, 2.0));
      scaled.push_back(k * powers.back());
    }
    topo.ue_positions = {{uniform(eng, 0, 1000), uniform(eng, 0, 1000)}};
    topo.head_azimuth = {head};
    const ExposureReport c = downlink_exposure(topo, beams, powers, radio, 0, tissue, limits);
    const ExposureReport d = downlink_exposure(topo, beams, scaled, radio, 0, tissue, limits);
    worst_lin = std::max({worst_lin, oracle::rel_err(d.sar_w_kg, k * c.sar_w_kg),
                          oracle::rel_err(d.incident_pd_w_m2, k * c.incident_pd_w_m2)});
  }
  verdict(5, worst_norm < 1e-6 && worst_lin < 1e-12,
          "pattern integral = 2 pi for 100 random patterns; SAR and PD linear in transmit power",
          fmt("max normalization rel err %.3g", worst_norm) + fmt(", max linearity rel err %.3g", worst_lin));
}

void criterion6(const TissueModel& tissue) {
  auto outputs = [&](unsigned par) {
    const CampaignResult r = run_campaign(presets(), tissue, 1000, 1, par);
    return std::make_pair(summary_csv(r), figure1_csv(r));
  };
  const auto ref = outputs(1);
  bool ok = outputs(1) == ref;
  for (unsigned par : {4u, 8u}) ok = ok && outputs(par) == ref;
  verdict(6, ok, "summary.csv and figure1_data.csv byte-identical across runs and parallelism 1, 4, 8",
          std::to_string(ref.first.size()) + " + " + std::to_string(ref.second.size()) + " bytes compared");
}

void criterion7() {
  const Scenario sc = default_scenario("5G");
  const std::size_t n = 10000;
  double sum = 0.0, sum2 = 0.0, lambda_a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const DeploymentConfig cfg = sc.deployment_config(trial_seed(7, i));
    lambda_a = cfg.intensity() * cfg.window.area();
    const double c = static_cast<double>(sample_topology(cfg).bs_count());
    sum += c;
    sum2 += c * c;
  }
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1);
  const double em = std::fabs(mean - lambda_a) / lambda_a, ev = std::fabs(var - lambda_a) / lambda_a;
  verdict(7, em < 0.05 && ev < 0.05, "PPP BS count mean and variance within 5% of lambda A over 10^4 seeds (5G density)",
          fmt("lambda A %.4g", lambda_a) + fmt(", mean %.4g", mean) + fmt(", variance %.4g", var));
}

void criterion8(const TissueModel& tissue) {
  std::vector<Scenario> scs;
  for (double radius : {200.0, 500.0, 1000.0}) {
    Scenario s = default_scenario("4G");
    s.profile.name = "4G-R" + std::to_string(static_cast<int>(radius));
    s.profile.cell_radius_m = radius;
    scs.push_back(s);
  }
  const CampaignResult r = run_campaign(scs, tissue, 1000, 1, 4);
  std::vector<double> pd;
  std::string detail;
  for (const auto& t : r.technologies) {
    pd.push_back(t.serving_link_pd.mean);
    detail += t.scenario.profile.name + fmt(" %.4g W/m^2; ", t.serving_link_pd.mean);
  }
  verdict(8, pd[0] > pd[1] && pd[1] > pd[2], "mean serving-link downlink PD strictly decreasing in cell radius",
          detail.substr(0, detail.size() - 2));
}

}  // namespace

int main() {
  const TissueModel tissue = skin();
  criterion1(tissue);
  criterion2(tissue);
  criterion3();
  criterion4(tissue);
  criterion5(tissue);
  criterion6(tissue);
  criterion7();
  criterion8(tissue);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
