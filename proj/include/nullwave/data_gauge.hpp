// Rectangular Cauchy data at t = 0 and its conversion to diagonal data for the
// double-null solver. Grid gauge: u(0,x) = x, ubar(0,x) = -x.
//
// The frame is reported against the background-normalized label
// u_bg = u + Z(-u), for which the simple wave has u_bg = t + x + Z(t - x)
// and the frame takes its closed form. u_scale = d u_bg / d u.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nullwave/background.hpp"
#include "nullwave/dn_core.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/nonlinearity.hpp"

namespace nullwave {

struct RectInitialData {
  using Fn = std::function<double(double)>;
  Fn phi0, phi0p, phi0pp;
  Fn phi1, phi1p;
  std::string label;

  // phi(0,x) = zeta(-x), d_t phi(0,x) = zeta'(-x).
  static RectInitialData background(const WaveProfile& profile);

  enum class Family { None, Bump, Algebraic };
  struct Perturbation {
    Family family = Family::None;
    double eps_bar = 0.0;
    double center = 0.0, width = 2.0;  // bump
    double gamma = 1.0;                // algebraic decay
    // phi1 gets eps_bar * velocity * p'(x) on top of the background.
    double velocity = 0.5;
  };

  // Background plus eps_bar * p(x) in phi0 and eps_bar * velocity * p'(x) in phi1,
  // with p the unit-amplitude bump or algebraic shape.
  static RectInitialData perturbed(const WaveProfile& profile, const Perturbation& p);

  // Columns x, phi0, phi0p, phi0pp, phi1, phi1p. Cubic Hermite inside the
  // table; the background continues the data outside it.
  static RectInitialData from_csv(const std::string& path, const WaveProfile& profile);
};

struct ClosenessCertificate {
  double eps_bar = 0.0;  // measured
  double gamma_bar = 1.0;
};

// Smallest eps_bar bounding the five differences to the background by the
// envelope on [-x_max, x_max] at the given spacing.
ClosenessCertificate closeness_certificate(const RectInitialData& data,
                                           const WaveProfile& profile, double x_max = 100.0,
                                           double spacing = 0.01);

double solve_phi_tt(const RectInitialData& data, const Nonlinearity& model, double x);

struct EikonalRoots {
  double du_t = 0.0, dub_t = 0.0;  // grid gauge
  double residual_u = 0.0, residual_ub = 0.0;  // g^{-1}(du,du), g^{-1}(dub,dub)
};

// Roots of both eikonal quadratics continued from the background state by an
// eight-step Newton homotopy, then snapped to the closed-form root.
EikonalRoots solve_eikonal_t0(const RectInitialData& data, const WaveProfile& profile,
                              const Nonlinearity& model, double x);

struct GaugeSlice {
  std::vector<double> x;
  std::vector<double> du_t, dub_t;
  std::vector<double> u_scale;
  std::vector<double> phi_tt;
  std::vector<double> L0, L1, Lb0, Lb1;  // normalized label for L
  std::vector<double> residual_u, residual_ub;
  std::vector<double> cross;  // g^{-1}(du_bg, dub), negative
};

struct DiagonalBuild {
  DiagonalData data;
  GaugeSlice slice;
};

DiagonalBuild build_diagonal_data(const RectInitialData& data, const WaveProfile& profile,
                                  const Nonlinearity& model, const DNGrid& grid);

// d u_bg / d u at grid label u: 1 + H(0) zeta'(-u)^2.
double u_scale(const WaveProfile& profile, const Nonlinearity& model, double u);

}  // namespace nullwave
