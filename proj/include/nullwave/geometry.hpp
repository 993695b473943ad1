// Null frame transport, coordinate reconstruction and the degeneracy monitor.
// Frame components refer to the normalized label u_bg (see data_gauge.hpp);
// grid u-derivatives are converted with the stored u_scale.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nullwave/background.hpp"
#include "nullwave/data_gauge.hpp"
#include "nullwave/dn_core.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/nonlinearity.hpp"

namespace nullwave {

// Everything the transport right-hand sides need at one node. Derivatives
// marked _u are with respect to u_bg.
struct TransportNode {
  double L0 = 0.0, L1 = 0.0, Lb0 = 0.0, Lb1 = 0.0;
  double sigma = 0.0, Phi0 = 0.0, Phi1 = 0.0;
  double dphi_u = 0.0, dphi_ub = 0.0;
  double dsigma_u = 0.0, dsigma_ub = 0.0;
  double dPhi0_u = 0.0, dPhi1_u = 0.0, dPhi0_ub = 0.0, dPhi1_ub = 0.0;
};

// Fills the wave part of a TransportNode from the perturbation variables.
TransportNode transport_node(const NodeWave& w, double dzeta, double d2zeta, double u_scale);

struct TransportRhs {
  std::array<double, 2> dLb_du{};   // d_{u_bg} Lb
  std::array<double, 2> dL_dub{};   // d_ub L
  double Omega_inv = 0.0;           // g(L, Lb)
};

TransportRhs transport_rhs(const TransportNode& n, const Nonlinearity& model);

// g(X, Y) for rectangular vectors at the state (Phi0, Phi1).
double metric_pair(const Nonlinearity& model, double Phi0, double Phi1, double X0, double X1,
                   double Y0, double Y1);

struct NullFrame {
  DNGrid grid;
  std::vector<double> L0, L1, Lb0, Lb1, Omega;
  std::vector<double> u_scale;  // per u index

  NullFrame() = default;
  explicit NullFrame(const DNGrid& g);
};

struct FrameOptions {
  int max_inner = 8;
  double inner_tol = 1e-12;
};

NullFrame integrate_frame(const DNState& state, const GaugeSlice& slice, const DNGrid& grid,
                          const WaveProfile& profile, const Nonlinearity& model,
                          const FrameOptions& opts = {});

namespace reference {
NullFrame integrate_frame_serial(const DNState& state, const GaugeSlice& slice,
                                 const DNGrid& grid, const WaveProfile& profile,
                                 const Nonlinearity& model, const FrameOptions& opts = {});
}  // namespace reference

// Deviations from the background frame, l = L - L_bg and lb = Lb - Lb_bg.
struct FrameDeviation {
  DNGrid grid;
  std::vector<double> l0, l1, lb0, lb1;
};

FrameDeviation frame_deviation(const NullFrame& frame, const WaveProfile& profile,
                               const Nonlinearity& model);

// Model transport with the delta-small terms dropped: lb constant in u and
// the decoupled equations for l0 -+ l1 solved by integrating factor along
// each u-line. Diagonal deviations come from the slice.
FrameDeviation solve_model_system(const WaveProfile& profile, const Nonlinearity& model,
                                  const GaugeSlice& slice, const DNGrid& grid);

struct CoordMap {
  DNGrid grid;
  std::vector<double> t, x;
  // d/du_bg and d/dubar of t and x from the frame, and the determinant.
  std::vector<double> t_u, t_ub, x_u, x_ub, detJ;
  double curl_residual = 0.0;
};

// Trapezoid integration of d_u x = u_scale Omega Lb, d_ub x = Omega L from the
// diagonal (t = 0, x = u) along both families; the result is their average
// and the largest disagreement is the curl residual.
CoordMap reconstruct_coords(const NullFrame& frame);

struct DegeneracyThresholds {
  double omega_lo = -2.0, omega_hi = -0.1;
  double min_L0 = 0.1;
  double min_detJ = 0.05;
  double max_component = 1e3;
};

struct DegeneracyReport {
  double min_abs_detJ = 0.0;
  double min_abs_L0 = 0.0, min_abs_Lb0 = 0.0;
  double omega_min = 0.0, omega_max = 0.0;
  double max_frame_deviation = 0.0;
  double max_component = 0.0;  // largest |L|, |Lb|, |g_{mu nu}|
  bool pass = true;
  std::optional<std::array<double, 2>> first_failure;  // (u, ubar)
  std::string failure;
};

DegeneracyReport degeneracy_monitor(const NullFrame& frame, const CoordMap& map,
                                    const DNState& state, const WaveProfile& profile,
                                    const Nonlinearity& model,
                                    const DegeneracyThresholds& th = {});

// u + Z(...) relabeling in closed form for the simple wave: x and t at the
// node given by the background coordinate change.
std::array<double, 2> background_coords(const WaveProfile& profile, const Nonlinearity& model,
                                        double u, double ub);

// Frame/coordinate CSV: u, ubar, L0, L1, Lb0, Lb1, Omega, t, x, detJ.
std::string frame_csv(const NullFrame& frame, const CoordMap& map);

}  // namespace nullwave
