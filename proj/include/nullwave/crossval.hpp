// Rectangular-coordinate reference solver and the comparison diagnostics.
#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "nullwave/background.hpp"
#include "nullwave/data_gauge.hpp"
#include "nullwave/dn_core.hpp"
#include "nullwave/geometry.hpp"
#include "nullwave/nonlinearity.hpp"

namespace nullwave {

struct RectGrid {
  double x_min = -10.0, x_max = 10.0;
  double dx = 0.02;
  double t_final = 1.0;
  double cfl = 0.4;                 // used to pick dt
  double cfl_limit = 0.45;          // checked every step
  double dissipation = 0.02;        // Kreiss-Oliger strength, 0 disables
  std::vector<double> snapshot_times;

  int nx() const;
  double x(int i) const { return x_min + i * dx; }
};

struct RectLevel {
  double t = 0.0;
  std::vector<double> phi, Phi0, Phi1;
};

struct RectState {
  RectGrid grid;
  double dt = 0.0;
  int steps = 0;
  double max_speed = 0.0;
  std::vector<RectLevel> snapshots;  // in the order of grid.snapshot_times
  std::array<RectLevel, 3> tail;     // last three equally spaced levels
};

// Heun (RK2) in time, fourth-order centered differences plus sixth-order
// Kreiss-Oliger dissipation in space. Three ghost cells per side hold the
// exact background zeta(t - x).
RectState rect_solve(const RectInitialData& data, const Nonlinearity& model, const RectGrid& grid,
                     const WaveProfile& profile);

namespace reference {
RectState rect_solve_serial(const RectInitialData& data, const Nonlinearity& model,
                            const RectGrid& grid, const WaveProfile& profile);
}  // namespace reference

// Largest characteristic speed |mu| over a level.
double max_char_speed(const Nonlinearity& model, const std::vector<double>& Phi0,
                      const std::vector<double>& Phi1);

// Sup-norm of d_mu(e^{f(sigma)} eta^{mu nu} d_nu phi) at the middle tail level,
// centered in t and x with d phi = (Phi0, Phi1).
double flux_residual(const RectState& rect, const Nonlinearity& model);

struct ComparisonReport {
  std::array<double, 3> sup_diff{};  // phi, Phi0, Phi1
  std::array<double, 3> l1_diff{};   // dx-weighted sums averaged over snapshots
  double interp_error_estimate = 0.0;
  int points = 0;
  int outside = 0;
  std::vector<double> orders;  // filled by refinement studies
  double max_sup() const { return std::max({sup_diff[0], sup_diff[1], sup_diff[2]}); }
};

struct PullbackSample {
  double u = 0.0, ub = 0.0;
  double phi = 0.0, Phi0 = 0.0, Phi1 = 0.0;
};

// Locates (u, ubar) with map(u, ubar) = (t, x) by Newton iteration on the
// bilinear interpolant. Returns false if the point is outside the computed
// triangle; throws InversionFailure if Newton does not converge.
bool invert_coords(const CoordMap& map, const WaveProfile& profile, const Nonlinearity& model,
                   double t, double x, double& u, double& ub);

PullbackSample sample_state(const DNState& dn, const WaveProfile& profile, double u, double ub);

ComparisonReport pullback_compare(const DNState& dn, const CoordMap& map, const RectState& rect,
                                  const WaveProfile& profile, const Nonlinearity& model);

// Along the last u-line, u_rel = t + x + Z(t - x) is constant for the pure
// simple wave. Returns u_rel at ubar = +R minus u_rel at ubar = -R.
double phase_shift(const CoordMap& map, const WaveProfile& profile, const Nonlinearity& model);

struct GradientPeak {
  double t = 0.0, x = 0.0;
  double norm = 0.0;  // |(Phi0, Phi1) - background|
};

// Where the rectangular gradient strays furthest from the simple wave, over
// the snapshots and the final level.
GradientPeak gradient_peak(const RectState& rect, const WaveProfile& profile);

}  // namespace nullwave
