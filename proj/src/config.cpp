#include "emf/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "emf/error.hpp"

namespace emf {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string child(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

[[noreturn]] void semantic(const std::string& path, const std::string& what) {
  throw Error("config error at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

// Typed, path-aware view of one JSON object.
class ObjectReader {
public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) semantic(path_, "expected an object");
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        std::string valid;
        for (auto k : keys) valid += (valid.empty() ? "" : ", ") + std::string(k);
        semantic(child(path_, key), "unknown key \"" + key + "\" (valid keys: " + valid + ")");
      }
    }
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  const json& at(std::string_view key) const { return j_.at(std::string(key)); }
  std::string path(std::string_view key) const { return child(path_, key); }

  void number(std::string_view key, double& out) const {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number()) semantic(path(key), "\"" + std::string(key) + "\" must be a number");
    out = v.get<double>();
  }

  void optional_number(std::string_view key, std::optional<double>& out) const {
    if (!has(key)) return;
    if (at(key).is_null()) {
      out.reset();
      return;
    }
    double v = 0.0;
    number(key, v);
    out = v;
  }

  template <typename Int>
  void integer(std::string_view key, Int& out, std::uint64_t min_value) const {
    if (!has(key)) return;
    const json& v = at(key);
    const std::string name = "\"" + std::string(key) + "\"";
    if (!v.is_number_integer()) semantic(path(key), name + " must be an integer");
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u < min_value) semantic(path(key), name + " must be >= " + std::to_string(min_value));
      if (u > std::numeric_limits<Int>::max()) semantic(path(key), name + " is too large");
      out = static_cast<Int>(u);
    } else {
      semantic(path(key), name + " must be >= " + std::to_string(min_value) + " (got " + v.dump() + ")");
    }
  }

  void string(std::string_view key, std::string& out) const {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_string()) semantic(path(key), "\"" + std::string(key) + "\" must be a string");
    out = v.get<std::string>();
  }

private:
  const json& j_;
  std::string path_;
};

template <typename Fn>
void checked(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    semantic(path, e.what());
  }
}

TechnologyProfile parse_profile(const json& j, const std::string& path) {
  if (j.is_string()) {
    TechnologyProfile p;
    checked(path, [&] { p = preset(j.get<std::string>()); });
    return p;
  }
  ObjectReader r(j, path);
  r.allow({"name", "base", "carrier_hz", "bandwidth_hz", "cell_radius_m", "bs_elements", "ue_elements", "bs_tx_power_w",
           "side_gain", "ue_tx_power_max_w", "ue_tx_power_min_w", "noise_figure_db", "pathloss_exponent",
           "target_rx_power_w", "reference_distance_m"});
  std::string name;
  r.string("name", name);
  if (name.empty()) semantic(r.path("name"), "scenario \"name\" is required");
  std::string base = name;
  r.string("base", base);
  const auto& presets = preset_names();
  if (std::find(presets.begin(), presets.end(), base) == presets.end()) {
    semantic(r.has("base") ? r.path("base") : r.path("name"),
             "\"base\" must name a preset (5G, 4G, 3.9G) when \"name\" is not a preset");
  }
  TechnologyProfile p = preset(base);
  p.name = name;
  r.number("carrier_hz", p.radio.carrier_hz);
  r.number("bandwidth_hz", p.radio.bandwidth_hz);
  r.number("cell_radius_m", p.cell_radius_m);
  r.integer("bs_elements", p.bs_elements, 1);
  r.integer("ue_elements", p.ue_elements, 1);
  r.number("bs_tx_power_w", p.bs_tx_power_w);
  r.number("side_gain", p.side_gain);
  r.number("ue_tx_power_max_w", p.radio.tx_power_max_w);
  r.number("ue_tx_power_min_w", p.radio.tx_power_min_w);
  r.number("noise_figure_db", p.radio.noise_figure_db);
  r.number("pathloss_exponent", p.radio.pathloss_exponent);
  r.number("target_rx_power_w", p.radio.target_rx_power_w);
  r.number("reference_distance_m", p.radio.reference_distance_m);
  checked(path, [&] { p.validate(); });
  return p;
}

DeploymentMode parse_mode(const std::string& s, const std::string& path) {
  if (s == "ppp") return DeploymentMode::ppp;
  if (s == "grid") return DeploymentMode::grid;
  semantic(path, "\"mode\" must be \"ppp\" or \"grid\"");
}

}  // namespace

std::string_view to_string(RecordLevel level) noexcept {
  switch (level) {
    case RecordLevel::summary: return "summary";
    case RecordLevel::full: return "full";
    case RecordLevel::decisions: break;
  }
  return "decisions";
}

RecordLevel parse_record_level(std::string_view s) {
  if (s == "summary") return RecordLevel::summary;
  if (s == "decisions") return RecordLevel::decisions;
  if (s == "full") return RecordLevel::full;
  throw Error("unknown record level '" + std::string(s) + "' (valid: summary, decisions, full)");
}

std::string default_tissue_table_path() { return std::string(EMF_DATA_DIR) + "/tissue/dry_skin.csv"; }

void RunConfig::validate() const {
  if (scenarios.empty()) semantic("/scenarios", "at least one scenario is required");
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    checked(child("/scenarios", i), [&] { scenarios[i].validate(); });
    for (std::size_t k = 0; k < i; ++k)
      if (scenarios[k].name == scenarios[i].name)
        semantic(child("/scenarios", i), "duplicate scenario name \"" + scenarios[i].name + "\"");
  }
  if (trials < 1) semantic("/trials", "\"trials\" must be >= 1");
  if (parallelism < 1) semantic("/parallelism", "\"parallelism\" must be >= 1");
  if (deployment.ue_count < 1) semantic("/deployment/ue_count", "\"ue_count\" must be >= 1");
  if (!(deployment.window_factor > 0.0)) semantic("/deployment/window_factor", "\"window_factor\" must be > 0");
  if (!(protocol.coverage_factor > 0.0)) semantic("/protocol/coverage_factor", "\"coverage_factor\" must be > 0");
  if (protocol.uplink_snr_floor && !(*protocol.uplink_snr_floor >= 0.0))
    semantic("/protocol/uplink_snr_floor", "\"uplink_snr_floor\" must be >= 0");
  if (protocol.downlink_rate_floor_bps && !(*protocol.downlink_rate_floor_bps >= 0.0))
    semantic("/protocol/downlink_rate_floor_bps", "\"downlink_rate_floor_bps\" must be >= 0");
  if (!(protocol.hysteresis_w_kg >= 0.0)) semantic("/protocol/hysteresis_w_kg", "\"hysteresis_w_kg\" must be >= 0");
  if (!(protocol.device_head_distance_m > 0.0))
    semantic("/protocol/device_head_distance_m", "\"device_head_distance_m\" must be > 0");
  checked("/limits", [&] { limits.validate(); });
  if (!(tissue_density_kg_m3 > 0.0)) semantic("/tissue/density_kg_m3", "\"density_kg_m3\" must be > 0");
  if (tissue_table_path.empty()) semantic("/tissue/table_path", "\"table_path\" must not be empty");
  if (output_dir.empty()) semantic("/output_dir", "\"output_dir\" must not be empty");
}

std::vector<Scenario> RunConfig::resolved_scenarios() const {
  std::vector<Scenario> out;
  for (const auto& p : scenarios) out.push_back(scenario(p.name));
  return out;
}

Scenario RunConfig::scenario(const std::string& name) const {
  const auto it = std::find_if(scenarios.begin(), scenarios.end(), [&](const auto& p) { return p.name == name; });
  if (it == scenarios.end()) throw Error("no scenario named '" + name + "' in the configuration");
  Scenario s;
  s.profile = *it;
  s.deployment = deployment;
  s.protocol = protocol;
  s.limits = limits;
  return s;
}

TissueModel RunConfig::load_tissue() const { return TissueModel::load_table(tissue_table_path, tissue_density_kg_m3); }

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error("config syntax error at " + line_column(text, e.byte) + ": " + e.what());
  }

  RunConfig c;
  c.tissue_table_path = default_tissue_table_path();
  for (const auto& name : preset_names()) c.scenarios.push_back(preset(name));

  ObjectReader root(j, "");
  root.allow({"scenarios", "trials", "master_seed", "parallelism", "deployment", "protocol", "limits", "tissue",
              "output_dir", "record_level"});

  if (root.has("scenarios")) {
    const json& list = root.at("scenarios");
    if (!list.is_array()) semantic("/scenarios", "\"scenarios\" must be an array");
    c.scenarios.clear();
    for (std::size_t i = 0; i < list.size(); ++i) c.scenarios.push_back(parse_profile(list[i], child("/scenarios", i)));
  }
  root.integer("trials", c.trials, 1);
  root.integer("master_seed", c.master_seed, 0);
  root.integer("parallelism", c.parallelism, 1);
  root.string("output_dir", c.output_dir);
  if (root.has("record_level")) {
    std::string level;
    root.string("record_level", level);
    checked("/record_level", [&] { c.record_level = parse_record_level(level); });
  }

  if (root.has("deployment")) {
    ObjectReader r(root.at("deployment"), "/deployment");
    r.allow({"mode", "ue_count", "window_factor"});
    if (r.has("mode")) {
      std::string mode;
      r.string("mode", mode);
      c.deployment.mode = parse_mode(mode, r.path("mode"));
    }
    r.integer("ue_count", c.deployment.ue_count, 1);
    r.number("window_factor", c.deployment.window_factor);
  }

  if (root.has("protocol")) {
    ObjectReader r(root.at("protocol"), "/protocol");
    r.allow({"coverage_factor", "uplink_snr_floor", "downlink_rate_floor_bps", "hysteresis_w_kg", "emission_metric",
             "device_head_distance_m"});
    r.number("coverage_factor", c.protocol.coverage_factor);
    r.optional_number("uplink_snr_floor", c.protocol.uplink_snr_floor);
    r.optional_number("downlink_rate_floor_bps", c.protocol.downlink_rate_floor_bps);
    r.number("hysteresis_w_kg", c.protocol.hysteresis_w_kg);
    r.number("device_head_distance_m", c.protocol.device_head_distance_m);
    if (r.has("emission_metric")) {
      std::string metric;
      r.string("emission_metric", metric);
      checked(r.path("emission_metric"), [&] { c.protocol.metric = parse_emission_metric(metric); });
    }
  }

  if (root.has("limits")) {
    ObjectReader r(root.at("limits"), "/limits");
    r.allow({"pd_limit_w_m2", "sar_limit_w_kg", "sar_trigger_w_kg"});
    r.number("pd_limit_w_m2", c.limits.pd_limit_w_m2);
    r.number("sar_limit_w_kg", c.limits.sar_limit_w_kg);
    r.number("sar_trigger_w_kg", c.limits.sar_trigger_w_kg);
  }

  if (root.has("tissue")) {
    ObjectReader r(root.at("tissue"), "/tissue");
    r.allow({"table_path", "density_kg_m3"});
    r.string("table_path", c.tissue_table_path);
    r.number("density_kg_m3", c.tissue_density_kg_m3);
  }

  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ordered_json to_json(const TechnologyProfile& p) {
  ordered_json j;
  j["name"] = p.name;
  j["carrier_hz"] = p.radio.carrier_hz;
  j["bandwidth_hz"] = p.radio.bandwidth_hz;
  j["cell_radius_m"] = p.cell_radius_m;
  j["bs_elements"] = p.bs_elements;
  j["ue_elements"] = p.ue_elements;
  j["bs_tx_power_w"] = p.bs_tx_power_w;
  j["side_gain"] = p.side_gain;
  j["ue_tx_power_max_w"] = p.radio.tx_power_max_w;
  j["ue_tx_power_min_w"] = p.radio.tx_power_min_w;
  j["noise_figure_db"] = p.radio.noise_figure_db;
  j["pathloss_exponent"] = p.radio.pathloss_exponent;
  j["target_rx_power_w"] = p.radio.target_rx_power_w;
  j["reference_distance_m"] = p.radio.reference_distance_m;
  return j;
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["scenarios"] = ordered_json::array();
  for (const auto& p : c.scenarios) {
    ordered_json pj = to_json(p);
    const auto& presets = preset_names();
    // Custom names need an explicit base; every field is overridden anyway.
    if (std::find(presets.begin(), presets.end(), p.name) == presets.end()) pj["base"] = presets.front();
    j["scenarios"].push_back(pj);
  }
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["parallelism"] = c.parallelism;
  j["deployment"] = {{"mode", c.deployment.mode == DeploymentMode::ppp ? "ppp" : "grid"},
                     {"ue_count", c.deployment.ue_count},
                     {"window_factor", c.deployment.window_factor}};
  ordered_json proto;
  proto["coverage_factor"] = c.protocol.coverage_factor;
  proto["uplink_snr_floor"] = c.protocol.uplink_snr_floor ? ordered_json(*c.protocol.uplink_snr_floor) : ordered_json();
  proto["downlink_rate_floor_bps"] =
      c.protocol.downlink_rate_floor_bps ? ordered_json(*c.protocol.downlink_rate_floor_bps) : ordered_json();
  proto["hysteresis_w_kg"] = c.protocol.hysteresis_w_kg;
  proto["emission_metric"] = std::string(to_string(c.protocol.metric));
  proto["device_head_distance_m"] = c.protocol.device_head_distance_m;
  j["protocol"] = proto;
  j["limits"] = {{"pd_limit_w_m2", c.limits.pd_limit_w_m2},
                 {"sar_limit_w_kg", c.limits.sar_limit_w_kg},
                 {"sar_trigger_w_kg", c.limits.sar_trigger_w_kg}};
  j["tissue"] = {{"table_path", c.tissue_table_path}, {"density_kg_m3", c.tissue_density_kg_m3}};
  j["output_dir"] = c.output_dir;
  j["record_level"] = std::string(to_string(c.record_level));
  return j;
}

void apply_overrides(RunConfig& config, const ConfigOverrides& o) {
  if (!o.scenarios.empty()) {
    std::vector<TechnologyProfile> chosen;
    for (const auto& name : o.scenarios) {
      const auto it = std::find_if(config.scenarios.begin(), config.scenarios.end(),
                                   [&](const auto& p) { return p.name == name; });
      chosen.push_back(it != config.scenarios.end() ? *it : preset(name));
    }
    config.scenarios = std::move(chosen);
  }
  if (o.trials) config.trials = *o.trials;
  if (o.master_seed) config.master_seed = *o.master_seed;
  if (o.output_dir) config.output_dir = *o.output_dir;
  if (o.parallelism) config.parallelism = *o.parallelism;
  if (o.record_level) config.record_level = parse_record_level(*o.record_level);
  config.validate();
}

}  // namespace emf
