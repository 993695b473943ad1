#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"
#include "parallel_util.hpp"
#include "rect_kernel.hpp"

namespace nullwave {

int RectGrid::nx() const {
  const double cells = (x_max - x_min) / dx;
  return static_cast<int>(std::llround(cells)) + 1;
}

namespace {

constexpr int kGhost = 3;

struct Fields {
  std::vector<double> phi, P0, P1;  // with ghosts
  explicit Fields(int n = 0) : phi(n, 0.0), P0(n, 0.0), P1(n, 0.0) {}
};

void validate(const RectGrid& g) {
  if (!(g.dx > 0.0) || !(g.x_max > g.x_min)) raise(ErrorKind::DomainError, "bad rect grid extent");
  const double cells = (g.x_max - g.x_min) / g.dx;
  if (std::abs(cells - std::round(cells)) > 1e-9 * std::max(1.0, cells) || cells < 8) {
    raise(ErrorKind::DomainError, "rect grid extent is not a whole number (>= 8) of cells");
  }
  if (!(g.t_final >= 0.0)) raise(ErrorKind::DomainError, "t_final must be >= 0");
  if (!(g.cfl > 0.0) || g.cfl > g.cfl_limit) {
    raise(ErrorKind::CFLViolation, "cfl number must lie in (0, cfl_limit]");
  }
  for (double t : g.snapshot_times) {
    if (t < 0.0 || t > g.t_final) raise(ErrorKind::DomainError, "snapshot time outside [0, t_final]");
  }
}

void fill_ghosts(Fields& f, int nx, double x_min, double dx, double t, const WaveProfile& p) {
  for (int gidx = 0; gidx < kGhost; ++gidx) {
    const double xl = x_min - (kGhost - gidx) * dx;
    const double xr = x_min + (nx - 1 + gidx + 1) * dx;
    const int il = gidx, ir = kGhost + nx + gidx;
    f.phi[il] = p.zeta(t - xl);
    f.P0[il] = p.dzeta(t - xl);
    f.P1[il] = -p.dzeta(t - xl);
    f.phi[ir] = p.zeta(t - xr);
    f.P0[ir] = p.dzeta(t - xr);
    f.P1[ir] = -p.dzeta(t - xr);
  }
}

void rhs(const Fields& f, Fields& r, int nx, double dx, double diss, const Nonlinearity& model,
         bool parallel) {
  const double c4 = 1.0 / (12.0 * dx);
  const double cko = diss / (64.0 * dx);
  detail::FirstError err;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = kGhost; i < kGhost + nx; ++i) {
    auto D = [&](const std::vector<double>& v) {
      return c4 * (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]);
    };
    auto KO = [&](const std::vector<double>& v) {
      return cko * (v[i - 3] - 6.0 * v[i - 2] + 15.0 * v[i - 1] - 20.0 * v[i] + 15.0 * v[i + 1] -
                    6.0 * v[i + 2] + v[i + 3]);
    };
    try {
      const MetricComponents m = acoustic_metric(model, f.P0[i], f.P1[i]);
      if (!(m.gi00 < 0.0)) {
        std::ostringstream os;
        os << "g^00 >= 0 at rect node " << i - kGhost;
        raise(ErrorKind::HyperbolicityLoss, os.str());
      }
      const double dP0 = D(f.P0), dP1 = D(f.P1);
      r.P1[i] = dP0;
      r.P0[i] = -(2.0 * m.gi01 * dP0 + m.gi11 * dP1) / m.gi00;
      r.phi[i] = f.P0[i];
      if (diss != 0.0) {
        r.phi[i] += KO(f.phi);
        r.P0[i] += KO(f.P0);
        r.P1[i] += KO(f.P1);
      }
    } catch (...) {
      err.capture(i);
    }
  }
  err.rethrow();
}

// One Heun step of size dt from time t.
void heun(Fields& y, Fields& k1, Fields& ys, Fields& k2, int nx, double x_min, double dx,
          double t, double dt, double diss, const Nonlinearity& model, const WaveProfile& p,
          bool parallel) {
  fill_ghosts(y, nx, x_min, dx, t, p);
  rhs(y, k1, nx, dx, diss, model, parallel);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = kGhost; i < kGhost + nx; ++i) {
    ys.phi[i] = y.phi[i] + dt * k1.phi[i];
    ys.P0[i] = y.P0[i] + dt * k1.P0[i];
    ys.P1[i] = y.P1[i] + dt * k1.P1[i];
  }
  fill_ghosts(ys, nx, x_min, dx, t + dt, p);
  rhs(ys, k2, nx, dx, diss, model, parallel);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = kGhost; i < kGhost + nx; ++i) {
    y.phi[i] = 0.5 * (y.phi[i] + ys.phi[i] + dt * k2.phi[i]);
    y.P0[i] = 0.5 * (y.P0[i] + ys.P0[i] + dt * k2.P0[i]);
    y.P1[i] = 0.5 * (y.P1[i] + ys.P1[i] + dt * k2.P1[i]);
  }
}

RectLevel level_of(const Fields& f, int nx, double t) {
  RectLevel l;
  l.t = t;
  l.phi.assign(f.phi.begin() + kGhost, f.phi.begin() + kGhost + nx);
  l.Phi0.assign(f.P0.begin() + kGhost, f.P0.begin() + kGhost + nx);
  l.Phi1.assign(f.P1.begin() + kGhost, f.P1.begin() + kGhost + nx);
  return l;
}

}  // namespace

double max_char_speed(const Nonlinearity& model, const std::vector<double>& Phi0,
                      const std::vector<double>& Phi1) {
  double c = 0.0;
  for (std::size_t i = 0; i < Phi0.size(); ++i) {
    const MetricComponents m = acoustic_metric(model, Phi0[i], Phi1[i]);
    if (!(m.gi00 < 0.0)) raise(ErrorKind::HyperbolicityLoss, "g^00 >= 0 in speed estimate");
    const double sq = std::sqrt(m.gi01 * m.gi01 - m.gi00 * m.gi11);
    c = std::max({c, std::abs((-m.gi01 + sq) / m.gi00), std::abs((-m.gi01 - sq) / m.gi00)});
  }
  return c;
}

namespace detail {

RectState rect_solve_impl(const RectInitialData& data, const Nonlinearity& model,
                          const RectGrid& grid, const WaveProfile& profile, bool parallel) {
  validate(grid);
  const int nx = grid.nx();
  const int n = nx + 2 * kGhost;
  Fields y(n), k1(n), ys(n), k2(n);
  for (int i = 0; i < nx; ++i) {
    const double x = grid.x(i);
    y.phi[kGhost + i] = data.phi0(x);
    y.P0[kGhost + i] = data.phi1(x);
    y.P1[kGhost + i] = data.phi0p(x);
  }
  RectState st;
  st.grid = grid;
  const double c0 = max_char_speed(model, level_of(y, nx, 0.0).Phi0, level_of(y, nx, 0.0).Phi1);
  st.max_speed = c0;
  const double dt_cfl = grid.cfl * grid.dx / std::max(c0, 1e-300);
  const int steps = grid.t_final > 0.0 ? std::max(2, static_cast<int>(std::ceil(grid.t_final / dt_cfl))) : 0;
  st.dt = steps > 0 ? grid.t_final / steps : 0.0;
  st.steps = steps;

  std::vector<std::pair<double, std::size_t>> snaps;
  for (std::size_t s = 0; s < grid.snapshot_times.size(); ++s) snaps.push_back({grid.snapshot_times[s], s});
  std::sort(snaps.begin(), snaps.end());
  st.snapshots.resize(snaps.size());
  std::size_t next_snap = 0;
  auto take_snapshots = [&](double t_now, double t_next) {
    // Snapshots in [t_now, t_next) are taken by a partial step from t_now.
    while (next_snap < snaps.size() && snaps[next_snap].first < t_next) {
      const double tau = snaps[next_snap].first;
      if (tau - t_now <= 1e-14 * std::max(1.0, tau)) {
        st.snapshots[snaps[next_snap].second] = level_of(y, nx, t_now);
      } else {
        Fields c = y, a(n), b(n), d(n);
        heun(c, a, b, d, nx, grid.x_min, grid.dx, t_now, tau - t_now, grid.dissipation, model,
             profile, parallel);
        st.snapshots[snaps[next_snap].second] = level_of(c, nx, tau);
      }
      ++next_snap;
    }
  };

  st.tail = {level_of(y, nx, 0.0), level_of(y, nx, 0.0), level_of(y, nx, 0.0)};
  for (int s = 0; s < steps; ++s) {
    const double t = grid.t_final * s / steps;
    const double t_next = grid.t_final * (s + 1) / steps;
    take_snapshots(t, t_next);
    const double c = max_char_speed(model, level_of(y, nx, t).Phi0, level_of(y, nx, t).Phi1);
    st.max_speed = std::max(st.max_speed, c);
    if (st.dt * c > grid.cfl_limit * grid.dx) {
      std::ostringstream os;
      os << "dt * c_max / dx = " << st.dt * c / grid.dx << " exceeds " << grid.cfl_limit
         << " at t = " << t;
      raise(ErrorKind::CFLViolation, os.str());
    }
    heun(y, k1, ys, k2, nx, grid.x_min, grid.dx, t, st.dt, grid.dissipation, model, profile,
         parallel);
    st.tail[0] = std::move(st.tail[1]);
    st.tail[1] = std::move(st.tail[2]);
    st.tail[2] = level_of(y, nx, t_next);
  }
  take_snapshots(grid.t_final, INFINITY);
  return st;
}

}  // namespace detail

RectState rect_solve(const RectInitialData& data, const Nonlinearity& model, const RectGrid& grid,
                     const WaveProfile& profile) {
  return detail::rect_solve_impl(data, model, grid, profile, true);
}

double flux_residual(const RectState& rect, const Nonlinearity& model) {
  const RectLevel &a = rect.tail[0], &b = rect.tail[1], &c = rect.tail[2];
  const double dt = c.t - b.t;
  if (!(dt > 0.0) || std::abs((b.t - a.t) - dt) > 1e-12 * std::max(1.0, dt) * 1e3) {
    raise(ErrorKind::DomainError, "flux_residual needs three equally spaced levels");
  }
  const double dx = rect.grid.dx;
  auto flux = [&](const RectLevel& l, int i, bool time) {
    const double s = -l.Phi0[i] * l.Phi0[i] + l.Phi1[i] * l.Phi1[i];
    const double ef = std::exp(model.f(s));
    return time ? -ef * l.Phi0[i] : ef * l.Phi1[i];
  };
  double res = 0.0;
  const int nx = static_cast<int>(b.phi.size());
  for (int i = 1; i + 1 < nx; ++i) {
    const double r = (flux(c, i, true) - flux(a, i, true)) / (2.0 * dt) +
                     (flux(b, i + 1, false) - flux(b, i - 1, false)) / (2.0 * dx);
    res = std::max(res, std::abs(r));
  }
  return res;
}

}  // namespace nullwave
