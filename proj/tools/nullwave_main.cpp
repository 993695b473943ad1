// nullwave: run, sweep and validate scenarios; print oracle tables.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nullwave/errors.hpp"
#include "nullwave/runner.hpp"
#include "nullwave/scenario.hpp"
#include "oracles.hpp"

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) nullwave::raise(nullwave::ErrorKind::IoError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    nullwave::raise(nullwave::ErrorKind::InvalidScenario, path + ": " + e.what());
  }
}

int cmd_run(const std::string& path, const std::string& out) {
  const nullwave::Scenario s = nullwave::load_scenario(path);
  const nullwave::RunResult r = nullwave::run_scenario(s);
  const std::string dir = out.empty() ? "out/" + s.name : out;
  nullwave::write_run(r, dir);
  for (const auto& e : r.report["errors"]) {
    std::cerr << "error [" << e["stage"].get<std::string>() << "] " << e["message"].get<std::string>()
              << "\n";
  }
  for (const auto& w : r.report.value("warnings", nlohmann::json::array())) {
    std::cerr << "warning: " << w.get<std::string>() << "\n";
  }
  std::cout << "wrote " << dir << "/report.json\n";
  return r.ok ? 0 : 1;
}

int cmd_sweep(const std::string& tpl, const std::string& grid, const std::string& out) {
  const nlohmann::json t = read_json(tpl);
  const nlohmann::json g = read_json(grid);
  const std::string parent = std::filesystem::path(tpl).parent_path().string();
  const auto res = nullwave::run_sweep(t, parent.empty() ? "." : parent, g, out);
  std::cout << res.reports.size() << " runs, " << res.failures << " failed; summary in " << out
            << "/summary.csv\n";
  return res.failures == 0 ? 0 : 1;
}

int cmd_validate(const std::string& path) {
  try {
    const nullwave::Scenario s = nullwave::load_scenario(path);
    const auto problems = nullwave::check_scenario(s);
    for (const auto& p : problems) std::cerr << path << ": " << p << "\n";
    if (problems.empty()) std::cout << path << ": ok\n";
    return problems.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 2;
  }
}

int cmd_oracle(const std::string& which) {
  if (which.empty()) {
    for (const auto& n : nwo::table_names()) std::cout << "# " << n << "\n" << nwo::table(n) << "\n";
  } else {
    std::cout << nwo::table(which);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nullwave: double-null solver for quasilinear waves around simple travelling waves"};
  app.require_subcommand(1);

  std::string scenario, out, tpl, grid, which;
  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("scenario", scenario, "scenario JSON")->required();
  run->add_option("--out", out, "output directory (default out/<name>)");

  std::string sweep_out = "sweep_out";
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid over a scenario template");
  sweep->add_option("template", tpl, "scenario template JSON")->required();
  sweep->add_option("grid", grid, "grid JSON: {\"dotted.path\": [values]}")->required();
  sweep->add_option("--out", sweep_out, "output directory");

  auto* val = app.add_subcommand("validate", "check a scenario without running it");
  val->add_option("scenario", scenario, "scenario JSON")->required();

  auto* orc = app.add_subcommand("oracle", "print reference tables");
  orc->add_option("--which", which, "table name")
      ->check(CLI::IsMember(nwo::table_names()));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(scenario, out);
    if (*sweep) return cmd_sweep(tpl, grid, sweep_out);
    if (*val) return cmd_validate(scenario);
    if (*orc) return cmd_oracle(which);
  } catch (const std::exception& e) {
    std::cerr << "nullwave: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
