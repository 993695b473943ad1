#include "nullwave/runner.hpp"

#include <omp.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <thread>

#include "nullwave/crossval.hpp"
#include "nullwave/errors.hpp"
#include "nullwave/io.hpp"
#include "nullwave/quadrature.hpp"

namespace nullwave {

using nlohmann::json;
namespace fs = std::filesystem;

int worker_cap() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NULLWAVE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return static_cast<int>(hw);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json error_entry(const std::string& stage, const std::exception& e) {
  const auto* ne = dynamic_cast<const Error*>(&e);
  return {{"stage", stage},
          {"kind", ne ? to_string(ne->kind()) : "InternalError"},
          {"message", e.what()}};
}

double max_abs_active(const DNGrid& g, const std::vector<double>& v) {
  const int N = g.N();
  double m = 0.0;
  for (int i = 0; i <= N; ++i) {
    for (int j = N - i; j <= N; ++j) m = std::max(m, std::abs(v[g.index(i, j)]));
  }
  return m;
}

json degeneracy_json(const DegeneracyReport& d) {
  json j = {{"pass", d.pass},
            {"min_abs_detJ", d.min_abs_detJ},
            {"min_abs_L0", d.min_abs_L0},
            {"min_abs_Lb0", d.min_abs_Lb0},
            {"omega_min", d.omega_min},
            {"omega_max", d.omega_max},
            {"max_frame_deviation", d.max_frame_deviation},
            {"max_component", d.max_component},
            {"failure", d.failure}};
  j["first_failure"] =
      d.first_failure ? json{(*d.first_failure)[0], (*d.first_failure)[1]} : json(nullptr);
  return j;
}

double frame_deviation_max(const FrameDeviation& d) {
  return std::max({max_abs_active(d.grid, d.l0), max_abs_active(d.grid, d.l1),
                   max_abs_active(d.grid, d.lb0), max_abs_active(d.grid, d.lb1)});
}

double model_system_gap(const FrameDeviation& full, const FrameDeviation& model) {
  const DNGrid& g = full.grid;
  const int N = g.N();
  double m = 0.0;
  for (int i = 0; i <= N; ++i) {
    for (int j = N - i; j <= N; ++j) {
      const std::size_t k = g.index(i, j);
      m = std::max({m, std::abs(full.l0[k] - model.l0[k]), std::abs(full.l1[k] - model.l1[k]),
                    std::abs(full.lb0[k] - model.lb0[k]), std::abs(full.lb1[k] - model.lb1[k])});
    }
  }
  return m;
}

RectGrid rect_grid_for(const Scenario& s, double h) {
  RectGrid rg;
  const double R = s.grid.box;
  const double t_final = s.crossval.t_final > 0.0 ? s.crossval.t_final : 0.5 * R;
  // Ghost cells hold the background; keep the edges causally away from the image.
  const double X = h * std::ceil((R + 2.0 * t_final + 1.0) / h);
  rg.x_min = -X;
  rg.x_max = X;
  rg.dx = h;
  rg.t_final = t_final;
  rg.cfl = s.crossval.cfl;
  // the linear model is an oracle run: nothing to damp, and no dissipation error to mask
  rg.dissipation = s.model.kind == "linear" ? 0.0 : s.crossval.dissipation;
  rg.snapshot_times = {0.5 * t_final, t_final};
  return rg;
}

// Everything computed at one grid spacing.
struct Level {
  DNGrid grid;
  std::optional<DiagonalBuild> diag;
  std::optional<DNState> state;
  std::optional<NullFrame> frame;
  std::optional<CoordMap> map;
  std::optional<RectState> rect;
  std::optional<ComparisonReport> cmp;
};

// Linear model with zero profile: both solvers against d'Alembert.
json dalembert_section(const RectInitialData& data, const Level& lv) {
  auto integral = [&](double a, double b) { return adaptive_simpson(data.phi1, a, b, 1e-13); };
  auto exact = [&](double t, double x) {
    const double p = x + t, m = x - t;
    return std::array<double, 3>{
        0.5 * (data.phi0(p) + data.phi0(m)) + 0.5 * integral(m, p),
        0.5 * (data.phi0p(p) - data.phi0p(m)) + 0.5 * (data.phi1(p) + data.phi1(m)),
        0.5 * (data.phi0p(p) + data.phi0p(m)) + 0.5 * (data.phi1(p) - data.phi1(m))};
  };
  json j;
  if (lv.rect) {
    double e = 0.0;
    for (const RectLevel& l : lv.rect->snapshots) {
      for (std::size_t k = 0; k < l.phi.size(); ++k) {
        const auto ex = exact(l.t, lv.rect->grid.x(static_cast<int>(k)));
        e = std::max({e, std::abs(l.phi[k] - ex[0]), std::abs(l.Phi0[k] - ex[1]),
                      std::abs(l.Phi1[k] - ex[2])});
      }
    }
    j["rect_sup_error"] = e;
  }
  if (lv.state && lv.map) {
    const DNGrid& g = lv.grid;
    const int N = g.N();
    double e = 0.0;
    for (int i = 0; i <= N; ++i) {
      for (int jj = N - i; jj <= N; ++jj) {
        const std::size_t k = g.index(i, jj);
        const auto ex = exact(lv.map->t[k], lv.map->x[k]);
        const double psi = (*lv.state)[Field::Psi][k], psib = (*lv.state)[Field::Psib][k];
        e = std::max({e, std::abs((*lv.state)[Field::Xi][k] - ex[0]),
                      std::abs(0.5 * (psi + psib) - ex[1]), std::abs(0.5 * (psi - psib) - ex[2])});
      }
    }
    j["dn_sup_error"] = e;
  }
  return j;
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
  RunResult out;
  json& rep = out.report;
  json& tim = out.timings;
  json errors = json::array();
  json warnings = json::array();
  rep["schema"] = kReportSchema;
  rep["scenario"] = scenario_to_json(s);

  if (const char* env = std::getenv("NULLWAVE_THREADS")) {
    (void)env;
    omp_set_num_threads(std::max(1, std::min(worker_cap(), omp_get_max_threads())));
  }

  auto fail = [&](const std::string& stage, const std::exception& e) {
    errors.push_back(error_entry(stage, e));
    out.ok = false;
  };

  const auto problems = check_scenario(s);
  if (!problems.empty()) {
    for (const auto& p : problems) {
      errors.push_back({{"stage", "scenario"}, {"kind", "InvalidScenario"}, {"message", p}});
    }
    rep["errors"] = errors;
    out.ok = false;
    return out;
  }

  // ---- data_gauge
  auto t0 = Clock::now();
  std::optional<Nonlinearity> model;
  std::optional<WaveProfile> profile;
  std::optional<RectInitialData> data;
  Level lv;
  json& dg = rep["data_gauge"];
  try {
    model = s.make_model();
    profile = s.make_profile();
    data = s.make_data(*profile);
    lv.grid = s.make_grid();
    const HyperbolicityReport hyp = hyperbolicity_check(*profile, *model);
    const ClosenessCertificate cc = closeness_certificate(*data, *profile);
    dg["model"] = model->name();
    dg["profile"] = profile->label();
    dg["M_zeta"] = profile->M_zeta();
    dg["hyperbolic"] = hyp.pass;
    dg["hyperbolicity_margin"] = hyp.margin;
    dg["eps_bar_measured"] = cc.eps_bar;
    lv.diag = build_diagonal_data(*data, *profile, *model, lv.grid);
    const GaugeSlice& sl = lv.diag->slice;
    double res = 0.0, cmin = INFINITY, cmax = -INFINITY, scale = 0.0;
    for (std::size_t k = 0; k < sl.x.size(); ++k) {
      res = std::max({res, std::abs(sl.residual_u[k]), std::abs(sl.residual_ub[k])});
      cmin = std::min(cmin, sl.cross[k]);
      cmax = std::max(cmax, sl.cross[k]);
      scale = std::max(scale, sl.u_scale[k]);
    }
    dg["eps0"] = diagonal_eps0(lv.diag->data, s.gamma_bar);
    dg["max_eikonal_residual"] = res;
    dg["cross_min"] = cmin;
    dg["cross_max"] = cmax;
    dg["u_scale_max"] = scale;
    dg["status"] = "ok";
  } catch (const std::exception& e) {
    dg["status"] = "failed";
    fail("data_gauge", e);
  }
  tim["data_gauge"] = seconds_since(t0);

  // ---- dn_core
  t0 = Clock::now();
  json& dn = rep["dn_core"];
  if (!lv.diag) {
    dn["status"] = "skipped";
  } else {
    try {
      MarchOptions mo;
      mo.max_inner = s.solver.inner_max;
      mo.inner_tol = s.solver.inner_tol;
      lv.state = march(lv.grid, lv.diag->data, *profile, *model, mo);
      const DNState& st = *lv.state;
      dn["perturbation_sup"] = {{"psi", max_abs_active(lv.grid, st[Field::Psi])},
                                {"psib", max_abs_active(lv.grid, st[Field::Psib])},
                                {"xi", max_abs_active(lv.grid, st[Field::Xi])}};
      const EnvelopeFit fit = verify_envelopes(st, s.gamma_bar);
      json jf;
      for (std::size_t k = 0; k < fit.delta.size(); ++k) jf[EnvelopeFit::names()[k]] = fit.delta[k];
      dn["envelope_fit"] = jf;
      dn["envelope_fit_max"] = fit.max();
      dn["sigma_residual"] = sigma_wave_residual(st, *profile, *model);
      dn["status"] = "ok";
    } catch (const std::exception& e) {
      dn["status"] = "failed";
      fail("dn_core", e);
    }
    if (lv.state && (s.solver.picard || s.solver.contraction)) {
      PicardConfig pc;
      const double eps0 = dg["eps0"].get<double>();
      pc.delta = s.solver.picard_delta > 0.0
                     ? s.solver.picard_delta
                     : std::max(1e-8, std::sqrt(6.0 * (1.0 + 1.0 / s.gamma_bar) * eps0));
      pc.tol = s.solver.picard_tol;
      pc.max_iter = s.solver.picard_max_iter;
      pc.order = s.solver.picard_order == "psib_first" ? PicardOrder::PsibFirst : PicardOrder::PsiFirst;
      json& pj = dn["picard"];
      pj["delta"] = pc.delta;
      try {
        if (s.solver.picard) {
          const PicardSolveResult pr = picard_solve(lv.grid, lv.diag->data, *profile, *model, pc);
          pj["iterations"] = pr.iterations;
          pj["converged"] = pr.converged;
          pj["increments"] = pr.increments;
          pj["metric_to_march"] = picard_metric(pr.state, *lv.state, s.gamma_bar);
        }
        if (s.solver.contraction) {
          const ContractionReport cr = contraction_ratio(lv.grid, lv.diag->data, *profile, *model, pc);
          pj["contraction"] = {{"ratios", cr.ratios},
                               {"max_ratio", cr.max_ratio},
                               {"in_ball", cr.in_ball},
                               {"eps0", cr.eps0},
                               {"smallness_relation", cr.smallness_relation},
                               {"delta_bound", cr.delta_bound}};
        }
      } catch (const std::exception& e) {
        fail("dn_core.picard", e);
      }
    }
  }
  tim["dn_core"] = seconds_since(t0);

  // ---- geometry
  t0 = Clock::now();
  json& geo = rep["geometry"];
  json degeneracy = nullptr;
  std::optional<std::array<double, 2>> flagged_tx;
  if (!lv.state) {
    geo["status"] = "skipped";
  } else {
    try {
      lv.frame = integrate_frame(*lv.state, lv.diag->slice, lv.grid, *profile, *model);
      lv.map = reconstruct_coords(*lv.frame);
      const DegeneracyReport d =
          degeneracy_monitor(*lv.frame, *lv.map, *lv.state, *profile, *model, s.monitor);
      degeneracy = degeneracy_json(d);
      const FrameDeviation fd = frame_deviation(*lv.frame, *profile, *model);
      const FrameDeviation ms = solve_model_system(*profile, *model, lv.diag->slice, lv.grid);
      geo["curl_residual"] = lv.map->curl_residual;
      geo["frame_deviation_max"] = frame_deviation_max(fd);
      geo["model_system_gap"] = model_system_gap(fd, ms);
      geo["degeneracy"] = degeneracy;
      geo["status"] = "ok";
      if (!d.pass) warnings.push_back("degeneracy monitor flagged: " + d.failure);
      if (d.first_failure) {
        const int i = static_cast<int>(std::lround(((*d.first_failure)[0] - lv.grid.u_min) / lv.grid.h));
        const int j = static_cast<int>(std::lround(((*d.first_failure)[1] - lv.grid.ub_min) / lv.grid.h));
        const std::size_t k = lv.grid.index(i, j);
        flagged_tx = std::array<double, 2>{lv.map->t[k], lv.map->x[k]};
      }
    } catch (const std::exception& e) {
      geo["status"] = "failed";
      fail("geometry", e);
    }
  }
  tim["geometry"] = seconds_since(t0);

  // ---- crossval
  t0 = Clock::now();
  json cmp = {{"sup_diff", nullptr}, {"l1_diff", nullptr}, {"orders", json::array()},
              {"phase_shift", nullptr}, {"degeneracy", degeneracy}};
  if (!s.crossval.enabled) {
    cmp["status"] = "disabled";
  } else if (!data) {
    cmp["status"] = "skipped";
  } else {
    try {
      lv.rect = rect_solve(*data, *model, rect_grid_for(s, s.grid.h), *profile);
      cmp["rect"] = {{"x_min", lv.rect->grid.x_min}, {"x_max", lv.rect->grid.x_max},
                     {"dx", lv.rect->grid.dx},       {"t_final", lv.rect->grid.t_final},
                     {"dt", lv.rect->dt},            {"steps", lv.rect->steps},
                     {"max_speed", lv.rect->max_speed}};
      cmp["flux_residual"] = flux_residual(*lv.rect, *model);
      if (flagged_tx) {
        // reported only; a shock seen by one solver should show up near the same place in the other
        const GradientPeak gp = gradient_peak(*lv.rect, *profile);
        cmp["degeneracy_correlation"] = {
            {"flag_t", (*flagged_tx)[0]}, {"flag_x", (*flagged_tx)[1]},
            {"rect_peak_t", gp.t},        {"rect_peak_x", gp.x},
            {"rect_peak_norm", gp.norm},
            {"distance", std::hypot(gp.t - (*flagged_tx)[0], gp.x - (*flagged_tx)[1])}};
      }
      if (lv.map) {
        lv.cmp = pullback_compare(*lv.state, *lv.map, *lv.rect, *profile, *model);
        cmp["sup_diff"] = lv.cmp->sup_diff;
        cmp["l1_diff"] = lv.cmp->l1_diff;
        cmp["interp_error_estimate"] = lv.cmp->interp_error_estimate;
        cmp["points"] = lv.cmp->points;
        cmp["outside"] = lv.cmp->outside;
        try {
          cmp["phase_shift"] = phase_shift(*lv.map, *profile, *model);
        } catch (const Error& e) {
          // A diagnostic that needs a wider box; not a pipeline failure.
          warnings.push_back(std::string("phase_shift: ") + e.what());
        }
      }
      cmp["status"] = lv.map ? "ok" : "partial";
    } catch (const std::exception& e) {
      cmp["status"] = "failed";
      fail("crossval", e);
    }
  }
  if (model && model->kind() == ModelKind::Linear && profile && profile->kind() == ProfileKind::Zero) {
    try {
      rep["dalembert"] = dalembert_section(*data, lv);
    } catch (const std::exception& e) {
      fail("crossval.dalembert", e);
    }
  }

  // ---- refinement study: the same pipeline at h/2, h/4, ...
  json table = json::array();
  if (s.crossval.enabled && s.crossval.refinement_levels > 1 && lv.cmp) {
    table.push_back({{"h", s.grid.h},
                     {"curl_residual", lv.map->curl_residual},
                     {"sigma_residual", dn["sigma_residual"]},
                     {"sup_diff_max", lv.cmp->max_sup()}});
    try {
      double h = s.grid.h;
      double prev = lv.cmp->max_sup();
      for (int k = 1; k < s.crossval.refinement_levels; ++k) {
        h *= 0.5;
        Scenario fine = s;
        fine.grid.h = h;
        const DNGrid g = fine.make_grid();
        const DiagonalBuild db = build_diagonal_data(*data, *profile, *model, g);
        const DNState st = march(g, db.data, *profile, *model);
        const NullFrame fr = integrate_frame(st, db.slice, g, *profile, *model);
        const CoordMap cm = reconstruct_coords(fr);
        const RectState rs = rect_solve(*data, *model, rect_grid_for(s, h), *profile);
        const ComparisonReport cr = pullback_compare(st, cm, rs, *profile, *model);
        table.push_back({{"h", h},
                         {"curl_residual", cm.curl_residual},
                         {"sigma_residual", sigma_wave_residual(st, *profile, *model)},
                         {"sup_diff_max", cr.max_sup()}});
        cmp["orders"].push_back(std::log2(prev / cr.max_sup()));
        prev = cr.max_sup();
      }
    } catch (const std::exception& e) {
      fail("crossval.refinement", e);
    }
  }
  rep["refinement"] = table;
  tim["crossval"] = seconds_since(t0);

  rep["comparison"] = cmp;
  rep["warnings"] = warnings;
  rep["errors"] = errors;

  if (lv.state && s.output.state_csv) out.state_csv = state_csv(*lv.state);
  if (lv.frame && lv.map && s.output.frame_csv) out.frame_csv = frame_csv(*lv.frame, *lv.map);
  return out;
}

void write_run(const RunResult& r, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(ErrorKind::IoError, "cannot create " + dir + ": " + ec.message());
  const fs::path d(dir);
  write_text_file((d / "report.json").string(), r.report.dump(2) + "\n");
  write_text_file((d / "timings.json").string(), r.timings.dump(2) + "\n");
  if (!r.state_csv.empty()) write_text_file((d / "state.csv").string(), r.state_csv);
  if (!r.frame_csv.empty()) write_text_file((d / "frame.csv").string(), r.frame_csv);
}

// ---- sweep

std::vector<json> expand_grid(const json& scenario_template, const json& grid) {
  if (!grid.is_object()) raise(ErrorKind::InvalidScenario, "sweep grid must be a JSON object");
  std::vector<json> runs;
  if (grid.empty()) return runs;
  std::vector<std::pair<json::json_pointer, const json*>> axes;
  for (auto it = grid.begin(); it != grid.end(); ++it) {  // keys iterate sorted
    if (!it->is_array()) {
      raise(ErrorKind::InvalidScenario, "sweep grid entry '" + it.key() + "' must be a list");
    }
    if (it->empty()) return runs;
    std::string ptr;
    std::size_t start = 0;
    const std::string& key = it.key();
    while (true) {
      const std::size_t dot = key.find('.', start);
      ptr += "/" + key.substr(start, dot - start);
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    axes.push_back({json::json_pointer(ptr), &*it});
  }
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    json sc = scenario_template;
    for (std::size_t a = 0; a < axes.size(); ++a) sc[axes[a].first] = (*axes[a].second)[idx[a]];
    runs.push_back(std::move(sc));
    // Last key varies fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second->size()) break;
      idx[a] = 0;
      if (a == 0) return runs;
    }
  }
}

namespace {

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

const json& at_path(const json& j, const char* ptr) {
  static const json null_value;
  const json::json_pointer p(ptr);
  return j.contains(p) ? j.at(p) : null_value;
}

}  // namespace

SweepResult run_sweep(const json& scenario_template, const std::string& base_dir, const json& grid,
                      const std::string& out_dir) {
  const std::vector<json> runs = expand_grid(scenario_template, grid);
  SweepResult res;
  res.reports.resize(runs.size());
  std::vector<char> ok(runs.size(), 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    omp_set_num_threads(1);
    for (std::size_t k = next++; k < runs.size(); k = next++) {
      RunResult r;
      try {
        r = run_scenario(scenario_from_json(runs[k], base_dir));
      } catch (const std::exception& e) {
        r.ok = false;
        r.report = {{"schema", kReportSchema},
                    {"scenario", runs[k]},
                    {"errors", json::array({error_entry("scenario", e)})}};
      }
      if (!out_dir.empty()) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%04zu", k);
        write_run(r, (fs::path(out_dir) / name).string());
      }
      ok[k] = r.ok;
      res.reports[k] = std::move(r.report);
    }
  };
  const int n_workers = static_cast<int>(std::min<std::size_t>(worker_cap(), runs.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<std::string> keys;
  for (auto it = grid.begin(); it != grid.end(); ++it) keys.push_back(it.key());
  static const std::pair<const char*, const char*> columns[] = {
      {"eps0", "/data_gauge/eps0"},
      {"envelope_fit_max", "/dn_core/envelope_fit_max"},
      {"sigma_residual", "/dn_core/sigma_residual"},
      {"picard_delta", "/dn_core/picard/delta"},
      {"max_ratio", "/dn_core/picard/contraction/max_ratio"},
      {"frame_deviation_max", "/geometry/frame_deviation_max"},
      {"model_system_gap", "/geometry/model_system_gap"},
      {"curl_residual", "/geometry/curl_residual"},
      {"min_abs_detJ", "/geometry/degeneracy/min_abs_detJ"},
      {"degeneracy_pass", "/geometry/degeneracy/pass"},
      {"sup_diff_phi", "/comparison/sup_diff/0"},
      {"flux_residual", "/comparison/flux_residual"},
      {"phase_shift", "/comparison/phase_shift"},
  };
  std::string csv = "run";
  for (const auto& k : keys) csv += "," + csv_cell(k);
  csv += ",status";
  for (const auto& c : columns) csv += std::string(",") + c.first;
  csv += ",errors\n";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const json& rep = res.reports[k];
    csv += std::to_string(k);
    for (const auto& key : keys) {
      std::string ptr = "/";
      for (char c : key) ptr += c == '.' ? '/' : c;
      csv += "," + csv_cell(at_path(runs[k], ptr.c_str()));
    }
    csv += ok[k] ? ",ok" : ",failed";
    for (const auto& c : columns) csv += "," + csv_cell(at_path(rep, c.second));
    const json& errs = at_path(rep, "/errors");
    csv += "," + std::to_string(errs.is_array() ? errs.size() : 0) + "\n";
    if (!ok[k]) ++res.failures;
  }
  res.summary_csv = std::move(csv);
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    write_text_file((fs::path(out_dir) / "summary.csv").string(), res.summary_csv);
  }
  return res;
}

}  // namespace nullwave
