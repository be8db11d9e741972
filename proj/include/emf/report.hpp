#pragma once

#include <cstddef>
#include <string>

#include "emf/config.hpp"
#include "emf/engine.hpp"
#include "json.hpp"

namespace emf {

/// %.17g rendering used for every floating-point field in CSV output.
std::string format_double(double v);

/// One row per technology and direction.
std::string summary_csv(const CampaignResult& result);

/// technology,direction,mean_sar_w_kg,ci_half_width: the bar-chart layout.
std::string figure1_csv(const CampaignResult& result);

nlohmann::ordered_json run_record(const CampaignResult& result, const RunConfig& config);

/// Write summary.csv, figure1_data.csv and run_record.json into config.output_dir.
void write_outputs(const CampaignResult& result, const RunConfig& config);

/// Human-readable trace of the association decisions for one UE in one trial.
std::string explain(const RunConfig& config, const std::string& technology, std::size_t trial, std::size_t ue);

}  // namespace emf
