#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nullwave/crossval.hpp"
#include "nullwave/data_gauge.hpp"
#include "nullwave/dn_core.hpp"
#include "nullwave/errors.hpp"
#include "nullwave/geometry.hpp"
#include "oracles.hpp"

namespace nwtest {

using namespace nullwave;

inline double max_abs(const DNGrid& g, const std::vector<double>& v) {
  double m = 0.0;
  for (int i = 0; i <= g.N(); ++i) {
    for (int j = g.N() - i; j <= g.N(); ++j) m = std::max(m, std::abs(v[g.index(i, j)]));
  }
  return m;
}

inline RectInitialData bump_data(const WaveProfile& p, double eps, double center = 0.5,
                                 double width = 1.5, double velocity = 0.5) {
  RectInitialData::Perturbation q;
  q.family = RectInitialData::Family::Bump;
  q.eps_bar = eps;
  q.center = center;
  q.width = width;
  q.velocity = velocity;
  return RectInitialData::perturbed(p, q);
}

struct Pipeline {
  DNGrid grid;
  DiagonalBuild diag;
  DNState state;
  NullFrame frame;
  CoordMap map;
};

inline Pipeline pipeline(const RectInitialData& data, const WaveProfile& p, const Nonlinearity& m,
                         double R, double h) {
  Pipeline out;
  out.grid = DNGrid::symmetric(R, h);
  out.diag = build_diagonal_data(data, p, m, out.grid);
  out.state = march(out.grid, out.diag.data, p, m);
  out.frame = integrate_frame(out.state, out.diag.slice, out.grid, p, m);
  out.map = reconstruct_coords(out.frame);
  return out;
}

// Fine-grid values sampled at the coarse nodes (the coarse grid is a subgrid).
inline double subgrid_diff(const DNGrid& coarse, const std::vector<double>& a, const DNGrid& fine,
                           const std::vector<double>& b) {
  const int r = static_cast<int>(std::lround(coarse.h / fine.h));
  double m = 0.0;
  for (int i = 0; i <= coarse.N(); ++i) {
    for (int j = coarse.N() - i; j <= coarse.N(); ++j) {
      m = std::max(m, std::abs(a[coarse.index(i, j)] - b[fine.index(r * i, r * j)]));
    }
  }
  return m;
}

inline WaveProfile gaussian_slope_profile() {
  // zeta = (sqrt(pi)/2) erf(x), so zeta' = exp(-x^2)
  return WaveProfile::custom([](double x) { return 0.5 * std::sqrt(M_PI) * std::erf(x); },
                             [](double x) { return std::exp(-x * x); },
                             [](double x) { return -2.0 * x * std::exp(-x * x); }, 1.0,
                             "gaussian-slope");
}

}  // namespace nwtest
