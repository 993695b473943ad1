#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"
#include "nullwave/geometry.hpp"
#include "nullwave/io.hpp"

namespace nullwave {

CoordMap reconstruct_coords(const NullFrame& frame) {
  const DNGrid& g = frame.grid;
  const int N = g.N();
  const double hh = 0.5 * g.h;
  CoordMap m;
  m.grid = g;
  for (auto* v : {&m.t, &m.x, &m.t_u, &m.t_ub, &m.x_u, &m.x_ub, &m.detJ}) v->assign(g.size(), 0.0);

  std::vector<double> Ft_u(g.size()), Fx_u(g.size()), Ft_ub(g.size()), Fx_ub(g.size());
  for (int i = 0; i <= N; ++i) {
    for (int j = N - i; j <= N; ++j) {
      const std::size_t k = g.index(i, j);
      const double Om = frame.Omega[k];
      if (!std::isfinite(Om)) {
        raise(ErrorKind::FrameDegenerate, "non-finite Omega at node (" + std::to_string(i) +
                                              ", " + std::to_string(j) + ")");
      }
      m.t_u[k] = Om * frame.Lb0[k];
      m.x_u[k] = Om * frame.Lb1[k];
      m.t_ub[k] = Om * frame.L0[k];
      m.x_ub[k] = Om * frame.L1[k];
      m.detJ[k] = m.t_u[k] * m.x_ub[k] - m.t_ub[k] * m.x_u[k];
      Ft_u[k] = frame.u_scale[i] * m.t_u[k];
      Fx_u[k] = frame.u_scale[i] * m.x_u[k];
      Ft_ub[k] = m.t_ub[k];
      Fx_ub[k] = m.x_ub[k];
    }
  }

  // Route A: along ubar from the diagonal node of the same u-line.
  std::vector<double> At(g.size()), Ax(g.size());
  for (int i = 0; i <= N; ++i) {
    const int j0 = N - i;
    std::size_t k = g.index(i, j0);
    At[k] = 0.0;
    Ax[k] = g.u(i);
    for (int j = j0 + 1; j <= N; ++j) {
      const std::size_t p = k;
      k = g.index(i, j);
      At[k] = At[p] + hh * (Ft_ub[p] + Ft_ub[k]);
      Ax[k] = Ax[p] + hh * (Fx_ub[p] + Fx_ub[k]);
    }
  }
  // Route B: along u from the diagonal node of the same ubar-line.
  double curl = 0.0;
  for (int j = 0; j <= N; ++j) {
    const int i0 = N - j;
    std::size_t k = g.index(i0, j);
    double Bt = 0.0, Bx = g.u(i0);
    m.t[k] = 0.0;
    m.x[k] = g.u(i0);
    for (int i = i0 + 1; i <= N; ++i) {
      const std::size_t p = k;
      k = g.index(i, j);
      Bt += hh * (Ft_u[p] + Ft_u[k]);
      Bx += hh * (Fx_u[p] + Fx_u[k]);
      curl = std::max({curl, std::abs(Bt - At[k]), std::abs(Bx - Ax[k])});
      m.t[k] = 0.5 * (At[k] + Bt);
      m.x[k] = 0.5 * (Ax[k] + Bx);
    }
  }
  m.curl_residual = curl;
  return m;
}

DegeneracyReport degeneracy_monitor(const NullFrame& frame, const CoordMap& map,
                                    const DNState& state, const WaveProfile& profile,
                                    const Nonlinearity& model, const DegeneracyThresholds& th) {
  const DNGrid& g = frame.grid;
  const int N = g.N();
  const double H0 = eval_coeffs(model, 0.0).H;
  DegeneracyReport r;
  r.min_abs_detJ = r.min_abs_L0 = r.min_abs_Lb0 = INFINITY;
  r.omega_min = INFINITY;
  r.omega_max = -INFINITY;
  for (int i = 0; i <= N; ++i) {
    for (int j = N - i; j <= N; ++j) {
      const std::size_t k = g.index(i, j);
      const double zp = profile.dzeta(g.ub(j));
      const double a = H0 * zp * zp;
      const double Om = frame.Omega[k];
      const double dJ = std::abs(map.detJ[k]);
      const double aL0 = std::abs(frame.L0[k]), aLb0 = std::abs(frame.Lb0[k]);
      const double dev = std::max({std::abs(frame.L0[k] + 1.0 + a), std::abs(frame.L1[k] - 1.0 + a),
                                   std::abs(frame.Lb0[k] + 1.0), std::abs(frame.Lb1[k] + 1.0)});
      const NodeWave w = state.node(i, j);
      const double Psi = w.psi, Psib = w.psib + 2.0 * zp;
      const double P0 = 0.5 * (Psi + Psib), P1 = 0.5 * (Psi - Psib);
      double H = NAN;
      try {
        H = eval_coeffs(model, -P0 * P0 + P1 * P1).H;
      } catch (const Error&) {
      }
      const double comp = std::max({std::abs(frame.L0[k]), std::abs(frame.L1[k]),
                                    std::abs(frame.Lb0[k]), std::abs(frame.Lb1[k]),
                                    std::abs(-1.0 + H * P0 * P0), std::abs(H * P0 * P1),
                                    std::abs(1.0 + H * P1 * P1)});
      r.min_abs_detJ = std::min(r.min_abs_detJ, dJ);
      r.min_abs_L0 = std::min(r.min_abs_L0, aL0);
      r.min_abs_Lb0 = std::min(r.min_abs_Lb0, aLb0);
      r.omega_min = std::min(r.omega_min, Om);
      r.omega_max = std::max(r.omega_max, Om);
      r.max_frame_deviation = std::max(r.max_frame_deviation, dev);
      r.max_component = std::max(r.max_component, std::isfinite(comp) ? comp : INFINITY);

      if (r.pass) {
        std::string why;
        if (!(Om >= th.omega_lo && Om <= th.omega_hi)) why = "Omega outside range";
        else if (!(aL0 >= th.min_L0)) why = "|L0| below threshold";
        else if (!(aLb0 >= th.min_L0)) why = "|Lb0| below threshold";
        else if (!(dJ >= th.min_detJ)) why = "|detJ| below threshold";
        else if (!(comp <= th.max_component)) why = "frame or metric component unbounded";
        if (!why.empty()) {
          r.pass = false;
          r.first_failure = std::array<double, 2>{g.u(i), g.ub(j)};
          r.failure = why;
        }
      }
    }
  }
  return r;
}

std::array<double, 2> background_coords(const WaveProfile& profile, const Nonlinearity& model,
                                        double u, double ub) {
  const double ubg = u + phase_function(profile, model, -u);
  const double Z = phase_function(profile, model, ub);
  return {0.5 * (ubg - Z + ub), 0.5 * (ubg - Z - ub)};
}

std::string frame_csv(const NullFrame& frame, const CoordMap& map) {
  const DNGrid& g = frame.grid;
  const int N = g.N();
  std::string out = "u,ubar,L0,L1,Lb0,Lb1,Omega,t,x,detJ\n";
  for (int i = 0; i <= N; ++i) {
    for (int j = N - i; j <= N; ++j) {
      const std::size_t k = g.index(i, j);
      const double vals[10] = {g.u(i),         g.ub(j),     frame.L0[k], frame.L1[k],
                               frame.Lb0[k],   frame.Lb1[k], frame.Omega[k], map.t[k],
                               map.x[k],       map.detJ[k]};
      for (int c = 0; c < 10; ++c) {
        if (c) out += ',';
        out += format_double(vals[c]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace nullwave
