// Pipeline orchestration behind the command-line tool.
#pragma once

#include <string>
#include <vector>

#include "nullwave/scenario.hpp"

#include "json.hpp"

namespace nullwave {

inline constexpr int kReportSchema = 1;

struct RunResult {
  nlohmann::json report;   // deterministic for a given scenario
  nlohmann::json timings;  // wall-clock seconds per stage
  std::string state_csv, frame_csv;
  bool ok = true;  // false if any stage raised
};

// data_gauge -> dn_core -> geometry -> crossval. A failing stage is recorded
// in report["errors"] and the stages that depend on it are marked skipped.
RunResult run_scenario(const Scenario& s);

// Writes report.json, timings.json and the enabled CSVs into dir.
void write_run(const RunResult& r, const std::string& dir);

struct SweepResult {
  std::vector<nlohmann::json> reports;  // in expansion order
  std::string summary_csv;
  int failures = 0;
};

// Expands grid (dotted scenario paths -> value lists) as a Cartesian product
// over the keys in sorted order. An empty grid yields no runs. Runs go to a
// std::thread pool capped by NULLWAVE_THREADS; results are merged by index.
SweepResult run_sweep(const nlohmann::json& scenario_template, const std::string& base_dir,
                      const nlohmann::json& grid, const std::string& out_dir = "");

std::vector<nlohmann::json> expand_grid(const nlohmann::json& scenario_template,
                                        const nlohmann::json& grid);

// Worker cap from NULLWAVE_THREADS (unset or invalid: hardware concurrency).
int worker_cap();

}  // namespace nullwave
