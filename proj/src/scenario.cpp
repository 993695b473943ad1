#include "nullwave/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  raise(ErrorKind::InvalidScenario, where + ": " + what);
}

// Reads optional members of one object and rejects anything it was not asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) bad(where_, "expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw std::runtime_error("not a number");
      } else if constexpr (std::is_same_v<T, int>) {
        if (!it->is_number_integer()) throw std::runtime_error("not an integer");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw std::runtime_error("not a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw std::runtime_error("not a string");
      }
      out = it->get<T>();
    } catch (const std::exception& e) {
      bad(where_ + "." + key, e.what());
    }
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) bad(where_, "unknown key '" + it.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_model(const json& j, ModelSpec& m) {
  if (j.is_string()) {
    m.kind = j.get<std::string>();
    if (m.kind != "membrane" && m.kind != "linear") bad("model", "unknown model '" + m.kind + "'");
    return;
  }
  if (j.is_object() && j.size() == 1 && j.contains("polynomial")) {
    const json& c = j["polynomial"];
    if (!c.is_array() || c.size() != 3) bad("model.polynomial", "expected [a, b, c]");
    for (int k = 0; k < 3; ++k) {
      if (!c[k].is_number()) bad("model.polynomial", "coefficients must be numbers");
      m.coeffs[k] = c[k].get<double>();
    }
    m.kind = "polynomial";
    return;
  }
  bad("model", "expected \"membrane\", \"linear\" or {\"polynomial\": [a, b, c]}");
}

void read_profile(const json& j, ProfileSpec& p) {
  if (j.is_string()) {
    p.kind = j.get<std::string>();
    if (p.kind != "zero") bad("profile", "unknown profile '" + p.kind + "'");
    return;
  }
  if (!j.is_object() || j.size() != 1) bad("profile", "expected \"zero\" or a one-key object");
  const auto it = j.begin();
  p.kind = it.key();
  if (p.kind == "table") {
    if (!it->is_string()) bad("profile.table", "expected a file path");
    p.path = it->get<std::string>();
    return;
  }
  ObjectReader r(*it, "profile." + p.kind);
  r.get("amplitude", p.amplitude);
  if (p.kind == "bump") {
    r.get("center", p.center);
    r.get("width", p.width);
  } else if (p.kind == "algebraic") {
    r.get("gamma", p.gamma);
  } else {
    bad("profile", "unknown profile '" + p.kind + "'");
  }
  r.finish();
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::string& base_dir) {
  Scenario s;
  s.base_dir = base_dir;
  ObjectReader top(j, "scenario");
  top.get("schema", s.schema);
  if (s.schema != kScenarioSchema) {
    bad("scenario.schema", "unsupported schema " + std::to_string(s.schema));
  }
  top.get("name", s.name);
  if (const json* m = top.sub("model")) read_model(*m, s.model);
  if (const json* p = top.sub("profile")) read_profile(*p, s.profile);
  top.get("gamma_bar", s.gamma_bar);
  if (const json* p = top.sub("perturbation")) {
    ObjectReader r(*p, "perturbation");
    auto& q = s.perturbation;
    r.get("family", q.family);
    r.get("eps_bar", q.eps_bar);
    r.get("center", q.center);
    r.get("width", q.width);
    r.get("gamma", q.gamma);
    r.get("velocity", q.velocity);
    r.get("path", q.path);
    r.finish();
  }
  if (const json* g = top.sub("grid")) {
    ObjectReader r(*g, "grid");
    r.get("h", s.grid.h);
    r.get("box", s.grid.box);
    r.finish();
  }
  if (const json* v = top.sub("solver")) {
    ObjectReader r(*v, "solver");
    auto& q = s.solver;
    r.get("picard", q.picard);
    r.get("picard_delta", q.picard_delta);
    r.get("picard_tol", q.picard_tol);
    r.get("picard_max_iter", q.picard_max_iter);
    r.get("picard_order", q.picard_order);
    r.get("contraction", q.contraction);
    r.get("inner_max", q.inner_max);
    r.get("inner_tol", q.inner_tol);
    r.finish();
  }
  if (const json* c = top.sub("crossval")) {
    ObjectReader r(*c, "crossval");
    auto& q = s.crossval;
    r.get("enabled", q.enabled);
    r.get("t_final", q.t_final);
    r.get("dissipation", q.dissipation);
    r.get("cfl", q.cfl);
    r.get("refinement_levels", q.refinement_levels);
    r.finish();
  }
  if (const json* m = top.sub("monitor")) {
    ObjectReader r(*m, "monitor");
    auto& q = s.monitor;
    r.get("omega_lo", q.omega_lo);
    r.get("omega_hi", q.omega_hi);
    r.get("min_L0", q.min_L0);
    r.get("min_detJ", q.min_detJ);
    r.get("max_component", q.max_component);
    r.finish();
  }
  if (const json* o = top.sub("output")) {
    ObjectReader r(*o, "output");
    r.get("state_csv", s.output.state_csv);
    r.get("frame_csv", s.output.frame_csv);
    r.finish();
  }
  top.finish();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["schema"] = s.schema;
  j["name"] = s.name;
  if (s.model.kind == "polynomial") {
    j["model"] = {{"polynomial", {s.model.coeffs[0], s.model.coeffs[1], s.model.coeffs[2]}}};
  } else {
    j["model"] = s.model.kind;
  }
  const auto& p = s.profile;
  if (p.kind == "zero") {
    j["profile"] = "zero";
  } else if (p.kind == "table") {
    j["profile"] = {{"table", p.path}};
  } else if (p.kind == "bump") {
    j["profile"] = {{"bump", {{"amplitude", p.amplitude}, {"center", p.center}, {"width", p.width}}}};
  } else {
    j["profile"] = {{"algebraic", {{"amplitude", p.amplitude}, {"gamma", p.gamma}}}};
  }
  j["gamma_bar"] = s.gamma_bar;
  const auto& q = s.perturbation;
  j["perturbation"] = {{"family", q.family}, {"eps_bar", q.eps_bar}, {"center", q.center},
                       {"width", q.width},   {"gamma", q.gamma},     {"velocity", q.velocity},
                       {"path", q.path}};
  j["grid"] = {{"h", s.grid.h}, {"box", s.grid.box}};
  const auto& v = s.solver;
  j["solver"] = {{"picard", v.picard},
                 {"picard_delta", v.picard_delta},
                 {"picard_tol", v.picard_tol},
                 {"picard_max_iter", v.picard_max_iter},
                 {"picard_order", v.picard_order},
                 {"contraction", v.contraction},
                 {"inner_max", v.inner_max},
                 {"inner_tol", v.inner_tol}};
  const auto& c = s.crossval;
  j["crossval"] = {{"enabled", c.enabled},
                   {"t_final", c.t_final},
                   {"dissipation", c.dissipation},
                   {"cfl", c.cfl},
                   {"refinement_levels", c.refinement_levels}};
  const auto& m = s.monitor;
  j["monitor"] = {{"omega_lo", m.omega_lo}, {"omega_hi", m.omega_hi}, {"min_L0", m.min_L0},
                  {"min_detJ", m.min_detJ}, {"max_component", m.max_component}};
  j["output"] = {{"state_csv", s.output.state_csv}, {"frame_csv", s.output.frame_csv}};
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open scenario " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    raise(ErrorKind::InvalidScenario, path + ": " + e.what());
  }
  const fs::path parent = fs::path(path).parent_path();
  return scenario_from_json(j, parent.empty() ? "." : parent.string());
}

std::string Scenario::resolve(const std::string& path) const {
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(base_dir) / p).string();
}

Nonlinearity Scenario::make_model() const {
  if (model.kind == "linear") return Nonlinearity::linear();
  if (model.kind == "membrane") return Nonlinearity::membrane();
  return Nonlinearity::polynomial(model.coeffs[0], model.coeffs[1], model.coeffs[2]);
}

WaveProfile Scenario::make_profile() const {
  if (profile.kind == "zero") return WaveProfile::zero(gamma_bar);
  if (profile.kind == "bump") {
    return WaveProfile::bump(profile.amplitude, profile.center, profile.width, gamma_bar);
  }
  if (profile.kind == "algebraic") return WaveProfile::algebraic(profile.amplitude, profile.gamma);
  return WaveProfile::table_from_csv(resolve(profile.path), gamma_bar);
}

RectInitialData Scenario::make_data(const WaveProfile& prof) const {
  const auto& q = perturbation;
  if (q.family == "csv") return RectInitialData::from_csv(resolve(q.path), prof);
  if (q.family == "none") return RectInitialData::background(prof);
  RectInitialData::Perturbation p;
  p.family = q.family == "bump" ? RectInitialData::Family::Bump : RectInitialData::Family::Algebraic;
  p.eps_bar = q.eps_bar;
  p.center = q.center;
  p.width = q.width;
  p.gamma = q.gamma;
  p.velocity = q.velocity;
  return RectInitialData::perturbed(prof, p);
}

DNGrid Scenario::make_grid() const { return DNGrid::symmetric(grid.box, grid.h); }

std::vector<std::string> check_scenario(const Scenario& s) {
  std::vector<std::string> out;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) out.push_back(msg);
  };
  auto finite = [](double v) { return std::isfinite(v); };

  need(s.schema == kScenarioSchema, "schema must be " + std::to_string(kScenarioSchema));
  need(finite(s.gamma_bar) && s.gamma_bar > 0.0, "gamma_bar must be > 0");
  for (double c : s.model.coeffs) need(finite(c), "model coefficients must be finite");

  const auto& p = s.profile;
  need(finite(p.amplitude), "profile amplitude must be finite");
  if (p.kind == "bump") need(p.width > 0.0, "profile bump width must be > 0");
  if (p.kind == "algebraic") {
    need(p.gamma > 0.0, "profile algebraic gamma must be > 0");
    need(s.gamma_bar <= p.gamma, "gamma_bar cannot exceed the algebraic profile's decay rate");
  }
  if (p.kind == "table") {
    need(!p.path.empty() && fs::exists(s.resolve(p.path)),
         "profile table '" + p.path + "' does not exist");
  }

  const auto& q = s.perturbation;
  const std::set<std::string> families{"none", "bump", "algebraic", "csv"};
  need(families.count(q.family) > 0, "perturbation family must be none, bump, algebraic or csv");
  need(finite(q.eps_bar) && q.eps_bar >= 0.0, "perturbation eps_bar must be >= 0");
  if (q.family == "bump") need(q.width > 0.0, "perturbation width must be > 0");
  if (q.family == "algebraic") need(q.gamma > 0.0, "perturbation gamma must be > 0");
  need(finite(q.velocity) && finite(q.center), "perturbation center/velocity must be finite");
  if (q.family == "csv") {
    need(!q.path.empty() && fs::exists(s.resolve(q.path)),
         "perturbation table '" + q.path + "' does not exist");
  }

  need(s.grid.h > 0.0 && s.grid.h <= 1.0, "grid.h must lie in (0, 1]");
  need(s.grid.box > 0.0 && s.grid.box <= 200.0, "grid.box must lie in (0, 200]");
  if (s.grid.h > 0.0 && s.grid.box > 0.0) {
    try {
      const DNGrid g = s.make_grid();
      const double nodes = static_cast<double>(g.n_u) * g.n_ub;
      need(nodes <= 5e7, "grid has more than 5e7 nodes");
    } catch (const Error& e) {
      out.push_back(e.what());
    }
  }

  const auto& v = s.solver;
  need(v.picard_delta >= 0.0, "solver.picard_delta must be >= 0");
  need(v.picard_tol > 0.0, "solver.picard_tol must be > 0");
  need(v.picard_max_iter >= 1, "solver.picard_max_iter must be >= 1");
  need(v.picard_order == "psi_first" || v.picard_order == "psib_first",
       "solver.picard_order must be psi_first or psib_first");
  need(v.inner_max >= 1, "solver.inner_max must be >= 1");
  need(v.inner_tol > 0.0, "solver.inner_tol must be > 0");

  const auto& c = s.crossval;
  need(c.t_final >= 0.0 && c.t_final < s.grid.box, "crossval.t_final must lie in [0, box)");
  need(c.dissipation >= 0.0 && c.dissipation <= 1.0, "crossval.dissipation must lie in [0, 1]");
  need(c.cfl > 0.0 && c.cfl <= 0.45, "crossval.cfl must lie in (0, 0.45]");
  need(c.refinement_levels >= 1 && c.refinement_levels <= 4,
       "crossval.refinement_levels must lie in [1, 4]");

  const auto& m = s.monitor;
  need(m.omega_lo < m.omega_hi, "monitor.omega_lo must be below omega_hi");
  need(m.min_L0 >= 0.0 && m.min_detJ >= 0.0 && m.max_component > 0.0,
       "monitor thresholds must be non-negative");
  return out;
}

}  // namespace nullwave
