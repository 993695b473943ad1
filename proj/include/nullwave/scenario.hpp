// Scenario files: one JSON document describing a full run.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "nullwave/background.hpp"
#include "nullwave/crossval.hpp"
#include "nullwave/data_gauge.hpp"
#include "nullwave/dn_core.hpp"
#include "nullwave/geometry.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/nonlinearity.hpp"

#include "json.hpp"

namespace nullwave {

inline constexpr int kScenarioSchema = 1;

struct ModelSpec {
  std::string kind = "membrane";  // membrane | linear | polynomial
  std::array<double, 3> coeffs{};
};

struct ProfileSpec {
  std::string kind = "bump";  // zero | bump | algebraic | table
  double amplitude = 0.3;
  double center = 0.0, width = 2.0;
  double gamma = 1.0;  // algebraic only
  std::string path;    // table only
};

struct PerturbationSpec {
  std::string family = "none";  // none | bump | algebraic | csv
  double eps_bar = 0.0;
  double center = 0.5, width = 1.5;
  double gamma = 1.0;
  double velocity = 0.5;
  std::string path;  // csv only
};

struct GridSpec {
  double h = 0.02;
  double box = 40.0;  // half-width R of [-R, R]^2
};

struct SolverSpec {
  bool picard = false;
  double picard_delta = 0.0;  // 0: derived from the diagonal data
  double picard_tol = 1e-10;
  int picard_max_iter = 60;
  std::string picard_order = "psi_first";  // psi_first | psib_first
  bool contraction = false;
  int inner_max = 8;
  double inner_tol = 1e-12;
};

struct CrossvalSpec {
  bool enabled = true;
  double t_final = 0.0;  // 0: half the box
  double dissipation = 0.02;
  double cfl = 0.4;
  int refinement_levels = 1;  // 1 = no refinement study
};

struct OutputSpec {
  bool state_csv = true;
  bool frame_csv = true;
};

struct Scenario {
  int schema = kScenarioSchema;
  std::string name = "scenario";
  ModelSpec model;
  ProfileSpec profile;
  double gamma_bar = 1.0;
  PerturbationSpec perturbation;
  GridSpec grid;
  SolverSpec solver;
  CrossvalSpec crossval;
  DegeneracyThresholds monitor;
  OutputSpec output;
  std::string base_dir = ".";  // relative paths resolve here; not serialized

  Nonlinearity make_model() const;
  WaveProfile make_profile() const;
  RectInitialData make_data(const WaveProfile& profile) const;
  DNGrid make_grid() const;
  std::string resolve(const std::string& path) const;
};

// Strict parse: unknown keys and wrong types raise InvalidScenario.
Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

// Empty when the scenario is usable; otherwise one message per problem.
std::vector<std::string> check_scenario(const Scenario& s);

}  // namespace nullwave
