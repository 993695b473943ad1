#include <cmath>
#include <sstream>

#include "nullwave/crossval.hpp"
#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

struct Cell {
  int i = 0, j = 0;
  double a = 0.0, b = 0.0;  // local coordinates, may fall outside [0,1] near the edges
};

Cell locate(const DNGrid& g, double u, double ub) {
  const int N = g.N();
  Cell c;
  c.i = std::clamp(static_cast<int>(std::floor((u - g.u_min) / g.h)), 0, N - 1);
  c.j = std::clamp(static_cast<int>(std::floor((ub - g.ub_min) / g.h)), 0, N - 1);
  // Half cells along the diagonal have an inactive corner; shift to a full one.
  while (c.i + c.j < g.N() && c.i < N - 1) ++c.i;
  while (c.i + c.j < g.N() && c.j < N - 1) ++c.j;
  c.a = (u - g.u(c.i)) / g.h;
  c.b = (ub - g.ub(c.j)) / g.h;
  return c;
}

struct Bilinear {
  double v, dv_da, dv_db;
};

Bilinear bilinear(const DNGrid& g, const std::vector<double>& f, const Cell& c) {
  const double f00 = f[g.index(c.i, c.j)], f10 = f[g.index(c.i + 1, c.j)];
  const double f01 = f[g.index(c.i, c.j + 1)], f11 = f[g.index(c.i + 1, c.j + 1)];
  const double a = c.a, b = c.b;
  return {f00 * (1 - a) * (1 - b) + f10 * a * (1 - b) + f01 * (1 - a) * b + f11 * a * b,
          (f10 - f00) * (1 - b) + (f11 - f01) * b, (f01 - f00) * (1 - a) + (f11 - f10) * a};
}

bool covered(const DNGrid& g, double u, double ub) {
  const double tol = 1e-12 * std::max(1.0, g.u_max - g.u_min);
  if (u < g.u_min - tol || u > g.u_max + tol || ub < g.ub_min - tol || ub > g.ub_max + tol) {
    return false;
  }
  const int N = g.N();
  const int i = std::clamp(static_cast<int>(std::floor((u - g.u_min) / g.h)), 0, N - 1);
  const int j = std::clamp(static_cast<int>(std::floor((ub - g.ub_min) / g.h)), 0, N - 1);
  return i + j >= N;
}

// Newton on u + Z(-u) = target; the derivative is u_scale.
double invert_background_label(const WaveProfile& profile, const Nonlinearity& model,
                               double target) {
  double u = target;
  for (int it = 0; it < 50; ++it) {
    const double r = u + phase_function(profile, model, -u) - target;
    const double d = u_scale(profile, model, u);
    const double du = r / d;
    u -= du;
    if (std::abs(du) <= 1e-13 * std::max(1.0, std::abs(u))) break;
  }
  return u;
}

}  // namespace

bool invert_coords(const CoordMap& map, const WaveProfile& profile, const Nonlinearity& model,
                   double t, double x, double& u, double& ub) {
  const DNGrid& g = map.grid;
  if (!std::isfinite(u) || !std::isfinite(ub)) {
    ub = t - x;
    u = invert_background_label(profile, model, t + x + phase_function(profile, model, ub));
  }
  const double scale = std::max({1.0, std::abs(t), std::abs(x)});
  for (int it = 0; it < 60; ++it) {
    const Cell c = locate(g, u, ub);
    const Bilinear bt = bilinear(g, map.t, c), bx = bilinear(g, map.x, c);
    const double rt = bt.v - t, rx = bx.v - x;
    if (std::abs(rt) + std::abs(rx) <= 1e-13 * scale) return covered(g, u, ub);
    const double J00 = bt.dv_da / g.h, J01 = bt.dv_db / g.h;
    const double J10 = bx.dv_da / g.h, J11 = bx.dv_db / g.h;
    const double det = J00 * J11 - J01 * J10;
    if (!(std::abs(det) > 1e-14)) {
      std::ostringstream os;
      os << "singular coordinate Jacobian near (u, ubar) = (" << u << ", " << ub << ")";
      raise(ErrorKind::InversionFailure, os.str());
    }
    const double du = (J11 * rt - J01 * rx) / det;
    const double dub = (-J10 * rt + J00 * rx) / det;
    u -= du;
    ub -= dub;
    // Far outside the box the interpolant is an extrapolation; stop early.
    const double span = g.u_max - g.u_min;
    if (u < g.u_min - span || u > g.u_max + span || ub < g.ub_min - span || ub > g.ub_max + span) {
      return false;
    }
  }
  if (!covered(g, u, ub)) return false;
  std::ostringstream os;
  os << "Newton did not converge for (t, x) = (" << t << ", " << x << ")";
  raise(ErrorKind::InversionFailure, os.str());
}

PullbackSample sample_state(const DNState& dn, const WaveProfile& profile, double u, double ub) {
  const Cell c = locate(dn.grid, u, ub);
  const double xi = bilinear(dn.grid, dn[Field::Xi], c).v;
  const double psi = bilinear(dn.grid, dn[Field::Psi], c).v;
  const double psib = bilinear(dn.grid, dn[Field::Psib], c).v;
  const double Psi = psi, Psib = psib + 2.0 * profile.dzeta(ub);
  PullbackSample s;
  s.u = u;
  s.ub = ub;
  s.phi = profile.zeta(ub) + xi;
  s.Phi0 = 0.5 * (Psi + Psib);
  s.Phi1 = 0.5 * (Psi - Psib);
  return s;
}

ComparisonReport pullback_compare(const DNState& dn, const CoordMap& map, const RectState& rect,
                                  const WaveProfile& profile, const Nonlinearity& model) {
  if (!(dn.grid == map.grid)) raise(ErrorKind::GridMismatch, "state and coordinate map grids differ");
  if (rect.snapshots.empty()) raise(ErrorKind::OutOfImage, "rectangular state has no snapshots");
  ComparisonReport rep;
  const DNGrid& g = dn.grid;
  const int N = g.N();

  // Bilinear error ~ h^2/8 times second differences over h^2.
  for (Field f : {Field::Xi, Field::Psi, Field::Psib}) {
    const auto& v = dn[f];
    for (int i = 1; i < N; ++i) {
      for (int j = std::max(1, N - i + 1); j < N; ++j) {
        if (i - 1 + j < N || i + j - 1 < N) continue;
        const double duu = v[g.index(i + 1, j)] - 2.0 * v[g.index(i, j)] + v[g.index(i - 1, j)];
        const double dbb = v[g.index(i, j + 1)] - 2.0 * v[g.index(i, j)] + v[g.index(i, j - 1)];
        rep.interp_error_estimate =
            std::max(rep.interp_error_estimate, (std::abs(duu) + std::abs(dbb)) / 8.0);
      }
    }
  }

  const double dx = rect.grid.dx;
  std::array<double, 3> l1_total{};
  int levels_used = 0;
  for (const RectLevel& lvl : rect.snapshots) {
    std::array<double, 3> l1{};
    int hits = 0;
    double u = NAN, ub = NAN;
    for (std::size_t k = 0; k < lvl.phi.size(); ++k) {
      const double x = rect.grid.x(static_cast<int>(k));
      double uu = u, bb = ub;
      bool inside = invert_coords(map, profile, model, lvl.t, x, uu, bb);
      if (!inside && std::isfinite(u)) {
        // A warm start can walk off the image from a far node; retry cold.
        uu = NAN;
        bb = NAN;
        inside = invert_coords(map, profile, model, lvl.t, x, uu, bb);
      }
      if (!inside) {
        ++rep.outside;
        u = ub = NAN;
        continue;
      }
      u = uu;
      ub = bb;
      const PullbackSample s = sample_state(dn, profile, u, ub);
      const double d[3] = {std::abs(s.phi - lvl.phi[k]), std::abs(s.Phi0 - lvl.Phi0[k]),
                           std::abs(s.Phi1 - lvl.Phi1[k])};
      for (int c = 0; c < 3; ++c) {
        rep.sup_diff[c] = std::max(rep.sup_diff[c], d[c]);
        l1[c] += d[c] * dx;
      }
      ++hits;
      ++rep.points;
    }
    if (hits > 0) {
      for (int c = 0; c < 3; ++c) l1_total[c] += l1[c];
      ++levels_used;
    }
  }
  if (rep.points == 0) raise(ErrorKind::OutOfImage, "no rectangular node lies in the coordinate image");
  for (int c = 0; c < 3; ++c) rep.l1_diff[c] = l1_total[c] / levels_used;
  return rep;
}

double phase_shift(const CoordMap& map, const WaveProfile& profile, const Nonlinearity& model) {
  const DNGrid& g = map.grid;
  const int N = g.N();
  const double tol = 1e-8 * std::max(1.0, profile.M_zeta());
  for (double s : {g.ub_min, g.ub_max, -g.u_min, -g.u_max}) {
    if (std::abs(profile.dzeta(s)) > tol || std::abs(profile.d2zeta(s)) > tol) {
      std::ostringstream os;
      os << "profile not negligible at the box edge s = " << s;
      raise(ErrorKind::InsufficientDomain, os.str());
    }
  }
  std::vector<double> rel(N + 1);
  for (int j = 0; j <= N; ++j) {
    const std::size_t k = g.index(N, j);
    const double t = map.t[k], x = map.x[k];
    rel[j] = t + x + phase_function(profile, model, t - x);
  }
  const double shift = rel[N] - rel[0];
  // Both ends have to have settled, otherwise the shift is still moving.
  const int tail = std::max(2, (N + 1) / 10);
  auto spread = [&](int lo, int hi) {
    double mn = rel[lo], mx = rel[lo];
    for (int j = lo; j <= hi; ++j) {
      mn = std::min(mn, rel[j]);
      mx = std::max(mx, rel[j]);
    }
    return mx - mn;
  };
  const double allowed = 1e-9 + 1e-2 * std::abs(shift);
  const double s_lo = spread(0, tail - 1), s_hi = spread(N - tail + 1, N);
  if (s_lo > allowed || s_hi > allowed) {
    std::ostringstream os;
    os << "u_rel still varies near the ends of the last u-line (spread " << std::max(s_lo, s_hi)
       << ", shift " << shift << ")";
    raise(ErrorKind::InsufficientDomain, os.str());
  }
  return shift;
}

GradientPeak gradient_peak(const RectState& rect, const WaveProfile& profile) {
  GradientPeak best;
  auto scan = [&](const RectLevel& l) {
    for (std::size_t k = 0; k < l.Phi0.size(); ++k) {
      const double x = rect.grid.x(static_cast<int>(k));
      const double zp = profile.dzeta(l.t - x);
      const double n = std::hypot(l.Phi0[k] - zp, l.Phi1[k] + zp);
      if (n > best.norm) best = {l.t, x, n};
    }
  };
  for (const RectLevel& l : rect.snapshots) scan(l);
  scan(rect.tail[2]);
  return best;
}

}  // namespace nullwave
