#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "emf/error.hpp"
#include "emf/report.hpp"
#include "oracles.hpp"

using namespace emf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("emf_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& out, const fs::path& err) {
  const std::string cmd =
      std::string(EMFSIM_PATH) + " " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig small_config(std::size_t trials = 20) {
  RunConfig c = parse_config("{}");
  c.trials = trials;
  c.master_seed = 42;
  c.parallelism = 2;
  return c;
}

CampaignResult run(const RunConfig& c) {
  return run_campaign(c.resolved_scenarios(), c.load_tissue(), c.trials, c.master_seed, c.parallelism);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("CSV layout") {
  RunConfig c = small_config();
  const CampaignResult r = run(c);
  const auto fig = lines(figure1_csv(r));
  REQUIRE(fig.size() == 1 + 3 * 2);
  CHECK(fig[0] == "technology,direction,mean_sar_w_kg,ci_half_width");
  CHECK(fig[1].rfind("5G,downlink,", 0) == 0);
  CHECK(fig[4].rfind("5G,uplink,", 0) == 0);
  const auto sum = lines(summary_csv(r));
  REQUIRE(sum.size() == 7);
  CHECK(sum[0].rfind("technology,direction,trials,skipped,mean_sar_w_kg", 0) == 0);

  c.parallelism = 1;
  const CampaignResult serial = run(c);
  CHECK(summary_csv(serial) == summary_csv(r));
  CHECK(figure1_csv(serial) == figure1_csv(r));
}

TEST_CASE("summary numbers are recomputable from the run record") {
  for (RecordLevel level : {RecordLevel::summary, RecordLevel::decisions, RecordLevel::full}) {
    RunConfig c = small_config(15);
    c.record_level = level;
    const CampaignResult r = run(c);
    const auto rec = nlohmann::json::parse(run_record(r, c).dump());
    CHECK(rec["format"] == "emf-run-record/1");
    CHECK(parse_config(rec["resolved_config"].dump()) == c);
    for (std::size_t t = 0; t < r.technologies.size(); ++t) {
      const auto& tj = rec["technologies"][t];
      for (const char* dir : {"uplink", "downlink"}) {
        std::vector<double> sar, pd;
        for (const auto& trial : tj["trial_records"]) {
          if (trial["skipped"].get<bool>()) continue;
          sar.push_back(trial["summary"][std::string(dir) + "_sar_w_kg"].get<double>());
          pd.push_back(trial["summary"][std::string(dir) + "_pd_w_m2"].get<double>());
        }
        const Estimate es = estimate(sar), ep = estimate(pd);
        const DirectionStats& want = std::string(dir) == "uplink" ? r.technologies[t].uplink : r.technologies[t].downlink;
        CHECK(format_double(es.mean) == format_double(want.sar.mean));
        CHECK(format_double(es.ci_half_width) == format_double(want.sar.ci_half_width));
        CHECK(format_double(ep.mean) == format_double(want.pd.mean));
        CHECK(tj["statistics"][dir]["sar_w_kg"]["mean"].get<double>() == want.sar.mean);
      }
      const auto& first = tj["trial_records"][0];
      CHECK(first.contains("decisions") == (level != RecordLevel::summary));
      CHECK(first.contains("topology") == (level == RecordLevel::full));
    }
  }
}

TEST_CASE("explain traces match the run record") {
  RunConfig c = small_config(10);
  c.scenarios = {preset("5G")};
  const CampaignResult r = run(c);
  bool saw_trigger = false, saw_quiet = false;
  for (const auto& rec : r.technologies[0].records) {
    if (rec.skipped) continue;
    for (std::size_t u = 0; u < rec.ues.size(); ++u) {
      const UeOutcome& o = rec.ues[u];
      if (o.uplink_triggered && o.uplink_bs != o.initial_bs && !saw_trigger) {
        saw_trigger = true;
        const std::string text = explain(c, "5G", rec.index, u);
        CHECK(text.find("argmin: BS " + std::to_string(o.uplink_bs) + " ") != std::string::npos);
        CHECK(text.find("handover: BS " + std::to_string(o.initial_bs) + " -> BS " + std::to_string(o.uplink_bs)) !=
              std::string::npos);
        CHECK(text.find(format_double(o.uplink.sar_w_kg)) != std::string::npos);
      }
      if (!o.uplink_triggered && !saw_quiet) {
        saw_quiet = true;
        CHECK(explain(c, "5G", rec.index, u).find("no trigger; serving BS retained") != std::string::npos);
      }
    }
  }
  CHECK(saw_trigger);
  CHECK(saw_quiet);
  CHECK_THROWS_WITH_AS(explain(c, "5G", 0, 10), "ue_index 10 out of range [0, 10)", Error);
  CHECK_THROWS_AS(explain(c, "5G", 10, 0), Error);
}

TEST_CASE("write_outputs creates the three files") {
  RunConfig c = small_config(5);
  c.output_dir = scratch("write").string();
  write_outputs(run(c), c);
  for (const char* f : {"summary.csv", "figure1_data.csv", "run_record.json"})
    CHECK(fs::exists(fs::path(c.output_dir) / f));
}

TEST_CASE("command-line runs") {
  const fs::path dir = scratch("cli");
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"scenarios": ["5G", "4G"], "trials": 50, "master_seed": 9, "record_level": "summary"})";
  }
  const std::string base = "--config '" + (dir / "cfg.json").string() + "' --trials 12";
  REQUIRE(run_cli(base + " --out '" + (dir / "a").string() + "' --parallelism 1", out, err) == 0);
  const auto echoed = nlohmann::json::parse(slurp(out));
  CHECK(echoed["trials"] == 12);
  CHECK(echoed["master_seed"] == 9);
  REQUIRE(run_cli(base + " --out '" + (dir / "b").string() + "' --parallelism 8", out, err) == 0);
  CHECK(slurp(dir / "a" / "summary.csv") == slurp(dir / "b" / "summary.csv"));
  CHECK(slurp(dir / "a" / "figure1_data.csv") == slurp(dir / "b" / "figure1_data.csv"));
  CHECK(lines(slurp(dir / "a" / "figure1_data.csv")).size() == 1 + 2 * 2);
  CHECK(slurp(err).find("uplink") != std::string::npos);

  CHECK(run_cli(base + " explain --trial 0 --ue 3", out, err) == 0);
  CHECK(slurp(out).find("technology 5G, trial 0") != std::string::npos);
  CHECK(run_cli(base + " explain --trial 0 --ue 99", out, err) == 2);
  CHECK(slurp(err).find("ue_index 99 out of range [0, 10)") != std::string::npos);

  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"limits": {"sar_limitt": 2}})";
  }
  CHECK(run_cli("--config '" + (dir / "bad.json").string() + "'", out, err) == 2);
  CHECK(slurp(err).find("sar_limitt") != std::string::npos);
}
