#include "emf/dosimetry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "emf/error.hpp"
#include "emf/kernels.hpp"

namespace emf {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double parse_number(std::string_view field, std::size_t line) {
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw Error("tissue table line " + std::to_string(line) + ": invalid number '" + std::string(field) + "'");
  return v;
}

// sqrt(eps_real - j eps_imag) on the principal branch (Re >= 0, Im <= 0).
std::complex<double> refractive_index(const TissueModel& tissue, double f) {
  return std::sqrt(tissue.permittivity(f));
}

}  // namespace

TissueModel::TissueModel(std::vector<DielectricRow> rows, double density_kg_m3)
    : rows_(std::move(rows)), density_(density_kg_m3) {
  if (!(density_ > 0.0) || !std::isfinite(density_)) throw Error("tissue: density must be > 0");
  if (rows_.size() < 2) throw Error("tissue: table needs at least 2 rows");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (!(r.frequency_hz > 0.0)) throw Error("tissue: row frequencies must be > 0");
    if (!(r.eps_real >= 1.0)) throw Error("tissue: eps_real must be >= 1");
    if (!(r.eps_imag >= 0.0)) throw Error("tissue: eps_imag must be >= 0");
    if (i > 0 && !(r.frequency_hz > rows_[i - 1].frequency_hz))
      throw Error("tissue: table must be sorted by strictly increasing frequency");
  }
}

TissueModel TissueModel::parse_table(std::string_view text, double density_kg_m3) {
  std::vector<DielectricRow> rows;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 3)
      throw Error("tissue table line " + std::to_string(line_no) + ": expected 3 fields");
    rows.push_back({parse_number(fields[0], line_no), parse_number(fields[1], line_no),
                    parse_number(fields[2], line_no)});
  }
  return TissueModel(std::move(rows), density_kg_m3);
}

TissueModel TissueModel::load_table(const std::filesystem::path& path, double density_kg_m3) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open tissue table '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str(), density_kg_m3);
}

bool TissueModel::covers(double frequency_hz) const noexcept {
  return frequency_hz >= rows_.front().frequency_hz && frequency_hz <= rows_.back().frequency_hz;
}

DielectricRow TissueModel::at(double frequency_hz) const {
  if (!covers(frequency_hz)) throw Error("frequency outside tissue table");
  const auto hi = std::lower_bound(rows_.begin(), rows_.end(), frequency_hz,
                                   [](const DielectricRow& r, double f) { return r.frequency_hz < f; });
  if (hi->frequency_hz == frequency_hz) return *hi;
  const auto lo = std::prev(hi);
  const double t = std::log(frequency_hz / lo->frequency_hz) / std::log(hi->frequency_hz / lo->frequency_hz);
  return {frequency_hz, lo->eps_real + t * (hi->eps_real - lo->eps_real),
          lo->eps_imag + t * (hi->eps_imag - lo->eps_imag)};
}

std::complex<double> TissueModel::permittivity(double frequency_hz) const {
  const DielectricRow r = at(frequency_hz);
  return {r.eps_real, -r.eps_imag};
}

double penetration_depth(const TissueModel& tissue, double frequency_hz) {
  const DielectricRow r = tissue.at(frequency_hz);
  if (r.eps_imag == 0.0) throw Error("lossless medium: penetration depth unbounded");
  const double k0 = 2.0 * std::numbers::pi * frequency_hz / kSpeedOfLight;
  const double alpha = k0 * std::fabs(refractive_index(tissue, frequency_hz).imag());
  return 1.0 / (2.0 * alpha);
}

double transmittance(const TissueModel& tissue, double frequency_hz) {
  const std::complex<double> n = refractive_index(tissue, frequency_hz);
  const std::complex<double> gamma = (1.0 - n) / (1.0 + n);
  return 1.0 - std::norm(gamma);
}

double surface_sar(double incident_pd_w_m2, const TissueModel& tissue, double frequency_hz) {
  if (!(incident_pd_w_m2 >= 0.0)) throw Error("surface SAR: incident power density must be >= 0");
  const double depth = penetration_depth(tissue, frequency_hz);
  return transmittance(tissue, frequency_hz) * incident_pd_w_m2 / (tissue.density_kg_m3() * depth);
}

void ExposureLimits::validate() const {
  if (!(pd_limit_w_m2 > 0.0) || !(sar_limit_w_kg > 0.0) || !(sar_trigger_w_kg > 0.0))
    throw Error("limits: all limits must be > 0");
  if (!(sar_trigger_w_kg <= sar_limit_w_kg)) throw Error("limits: sar_trigger_w_kg must not exceed sar_limit_w_kg");
}

ExposureReport compliance(ExposureReport report, const ExposureLimits& limits) {
  report.pd_limit_fraction = report.incident_pd_w_m2 / limits.pd_limit_w_m2;
  report.sar_limit_fraction = report.sar_w_kg / limits.sar_limit_w_kg;
  report.compliant = report.pd_limit_fraction <= 1.0 && report.sar_limit_fraction <= 1.0;
  return report;
}

ExposureReport downlink_exposure(const Topology& topology, std::span<const AntennaPattern> beams,
                                 std::span<const double> powers_w, const RadioParams& params,
                                 std::size_t ue_index, const TissueModel& tissue,
                                 const ExposureLimits& limits) {
  const std::size_t n = topology.bs_count();
  if (beams.size() != n || powers_w.size() != n)
    throw Error("downlink exposure: need one beam and one power per BS");
  if (ue_index >= topology.ue_count()) throw Error("downlink exposure: UE index out of range");
  const Point2D ue = topology.ue_positions[ue_index];

  std::vector<double> xs(n), ys(n), eirp(n), dist2(n), pd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D bs = topology.bs_positions[i];
    xs[i] = bs.x;
    ys[i] = bs.y;
    if (!(powers_w[i] >= 0.0)) throw Error("downlink exposure: BS power must be >= 0");
    eirp[i] = powers_w[i] * gain_at(beams[i], azimuth(bs, ue));
  }
  const double d_ref = params.reference_distance_m;
  kernels::point_source_pd(xs, ys, eirp, ue, d_ref * d_ref, dist2, pd);

  ExposureReport report;
  report.per_source.reserve(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (params.pathloss_exponent != 2.0) pd[i] *= excess_attenuation(params, std::sqrt(dist2[i]));
    report.per_source.push_back({static_cast<std::int64_t>(i), pd[i]});
    total += pd[i];
  }
  report.incident_pd_w_m2 = total;
  report.sar_w_kg = surface_sar(total, tissue, params.carrier_hz);
  return compliance(std::move(report), limits);
}

ExposureReport uplink_exposure(double ue_tx_power_w, const AntennaPattern& ue_pattern,
                               double head_azimuth, double device_head_distance_m,
                               const TissueModel& tissue, double frequency_hz,
                               const ExposureLimits& limits) {
  if (!(device_head_distance_m > 0.0)) throw Error("uplink exposure: device_head_distance must be > 0");
  if (!(ue_tx_power_w >= 0.0)) throw Error("uplink exposure: tx power must be >= 0");
  const double eirp = ue_tx_power_w * gain_at(ue_pattern, head_azimuth);
  ExposureReport report;
  report.incident_pd_w_m2 = eirp / (kFourPi * device_head_distance_m * device_head_distance_m);
  report.per_source.push_back({kDeviceSource, report.incident_pd_w_m2});
  report.sar_w_kg = surface_sar(report.incident_pd_w_m2, tissue, frequency_hz);
  return compliance(std::move(report), limits);
}

}  // namespace emf
