#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emf/engine.hpp"
#include "json.hpp"

namespace emf {

enum class RecordLevel { summary, decisions, full };

std::string_view to_string(RecordLevel level) noexcept;
RecordLevel parse_record_level(std::string_view s);

/// A validated batch experiment. Deployment, protocol and limit settings are
/// shared by every scenario; scenarios differ in their technology profile.
struct RunConfig {
  std::vector<TechnologyProfile> scenarios;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  unsigned parallelism = 4;
  DeploymentSettings deployment;
  ProtocolConfig protocol;
  ExposureLimits limits;
  std::string tissue_table_path;
  double tissue_density_kg_m3 = kDefaultSkinDensity;
  std::string output_dir = "results";
  RecordLevel record_level = RecordLevel::decisions;

  void validate() const;
  std::vector<Scenario> resolved_scenarios() const;
  Scenario scenario(const std::string& name) const;
  TissueModel load_tissue() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string default_tissue_table_path();

/// Parse and validate a JSON run configuration. Unknown keys are rejected
/// with their JSON-pointer location; syntax errors report line and column.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Fully expanded configuration. parse_config(to_json(c).dump()) == c.
nlohmann::ordered_json to_json(const RunConfig& config);
nlohmann::ordered_json to_json(const TechnologyProfile& profile);

/// Command-line values that take precedence over the configuration file.
struct ConfigOverrides {
  std::vector<std::string> scenarios;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::string> output_dir;
  std::optional<unsigned> parallelism;
  std::optional<std::string> record_level;
};

void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

}  // namespace emf
