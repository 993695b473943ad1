#include <algorithm>
#include <cmath>
#include <sstream>

#include "frame_cell.hpp"
#include "nullwave/errors.hpp"
#include "parallel_util.hpp"

namespace nullwave {

NullFrame::NullFrame(const DNGrid& g) : grid(g) {
  for (auto* v : {&L0, &L1, &Lb0, &Lb1, &Omega}) v->assign(g.size(), 0.0);
  u_scale.assign(g.n_u, 1.0);
}

namespace detail {

FrameContext::FrameContext(const DNGrid& g, const DNState& s, const WaveProfile& profile,
                           const Nonlinearity& m, const FrameOptions& o, NullFrame& f)
    : grid(g), state(s), model(m), opts(o), frame(f) {
  const double H0 = eval_coeffs(m, 0.0).H;
  zp.resize(g.n_ub);
  zpp.resize(g.n_ub);
  Lbg0.resize(g.n_ub);
  Lbg1.resize(g.n_ub);
  dLbg.resize(g.n_ub);
  for (int j = 0; j < g.n_ub; ++j) {
    zp[j] = profile.dzeta(g.ub(j));
    zpp[j] = profile.d2zeta(g.ub(j));
    Lbg0[j] = -1.0 - H0 * zp[j] * zp[j];
    Lbg1[j] = 1.0 - H0 * zp[j] * zp[j];
    dLbg[j] = -2.0 * H0 * zp[j] * zpp[j];
  }
  for (int i = 0; i < g.n_u; ++i) {
    const double a = profile.dzeta(-g.u(i));
    f.u_scale[i] = 1.0 + H0 * a * a;
  }
  for (auto* v : {&rL0, &rL1, &rLb0, &rLb1}) v->assign(g.size(), 0.0);
}

namespace {

std::string where(const DNGrid& g, int i, int j) {
  std::ostringstream os;
  os.precision(17);
  os << " at node (" << i << ", " << j << "), (u, ubar) = (" << g.u(i) << ", " << g.ub(j) << ")";
  return os.str();
}

TransportRhs eval_at(FrameContext& ctx, int i, int j, double L0, double L1, double Lb0,
                     double Lb1) {
  TransportNode n = transport_node(ctx.state.node(i, j), ctx.zp[j], ctx.zpp[j],
                                   ctx.frame.u_scale[i]);
  n.L0 = L0;
  n.L1 = L1;
  n.Lb0 = Lb0;
  n.Lb1 = Lb1;
  try {
    return transport_rhs(n, ctx.model);
  } catch (const Error& e) {
    throw Error(e.kind(), e.what() + where(ctx.grid, i, j));
  }
}

void store(FrameContext& ctx, int i, int j, double L0, double L1, double Lb0, double Lb1,
           const TransportRhs& r) {
  const std::size_t k = ctx.grid.index(i, j);
  const double us = ctx.frame.u_scale[i];
  ctx.frame.L0[k] = L0;
  ctx.frame.L1[k] = L1;
  ctx.frame.Lb0[k] = Lb0;
  ctx.frame.Lb1[k] = Lb1;
  ctx.frame.Omega[k] = 1.0 / r.Omega_inv;
  ctx.rL0[k] = r.dL_dub[0];
  ctx.rL1[k] = r.dL_dub[1];
  ctx.rLb0[k] = us * r.dLb_du[0];
  ctx.rLb1[k] = us * r.dLb_du[1];
}

}  // namespace

void load_frame_diagonal(FrameContext& ctx, const GaugeSlice& slice) {
  const int N = ctx.grid.N();
  if (static_cast<int>(slice.L0.size()) != N + 1) {
    raise(ErrorKind::GridMismatch, "gauge slice does not match grid");
  }
  for (int k = 0; k <= N; ++k) {
    const int j = N - k;
    const TransportRhs r = eval_at(ctx, k, j, slice.L0[k], slice.L1[k], slice.Lb0[k], slice.Lb1[k]);
    store(ctx, k, j, slice.L0[k], slice.L1[k], slice.Lb0[k], slice.Lb1[k], r);
  }
}

void frame_cell(FrameContext& ctx, int i, int j) {
  const DNGrid& g = ctx.grid;
  const NullFrame& f = ctx.frame;
  const double h = g.h, hh = 0.5 * h;
  const std::size_t s = g.index(i, j - 1), w = g.index(i - 1, j);

  // L is integrated as a deviation from the background so that the simple
  // wave is reproduced to rounding.
  const double dS0 = f.L0[s] - ctx.Lbg0[j - 1], dS1 = f.L1[s] - ctx.Lbg1[j - 1];
  const double qS0 = ctx.rL0[s] - ctx.dLbg[j - 1], qS1 = ctx.rL1[s] - ctx.dLbg[j - 1];
  const double bW0 = f.Lb0[w], bW1 = f.Lb1[w];
  const double gW0 = ctx.rLb0[w], gW1 = ctx.rLb1[w];
  const double us = f.u_scale[i];

  double L0 = ctx.Lbg0[j] + dS0 + h * qS0;
  double L1 = ctx.Lbg1[j] + dS1 + h * qS1;
  double Lb0 = bW0 + h * gW0;
  double Lb1 = bW1 + h * gW1;
  double omega = 1.0, prev = INFINITY;
  for (int it = 0; it < ctx.opts.max_inner; ++it) {
    const TransportRhs r = eval_at(ctx, i, j, L0, L1, Lb0, Lb1);
    const double nL0 = ctx.Lbg0[j] + dS0 + hh * (qS0 + r.dL_dub[0] - ctx.dLbg[j]);
    const double nL1 = ctx.Lbg1[j] + dS1 + hh * (qS1 + r.dL_dub[1] - ctx.dLbg[j]);
    const double nLb0 = bW0 + hh * (gW0 + us * r.dLb_du[0]);
    const double nLb1 = bW1 + hh * (gW1 + us * r.dLb_du[1]);
    const double diff = std::max({std::abs(nL0 - L0), std::abs(nL1 - L1), std::abs(nLb0 - Lb0),
                                  std::abs(nLb1 - Lb1)});
    if (!std::isfinite(diff)) break;
    if (diff <= ctx.opts.inner_tol) {
      store(ctx, i, j, nL0, nL1, nLb0, nLb1, eval_at(ctx, i, j, nL0, nL1, nLb0, nLb1));
      return;
    }
    if (diff > prev) omega *= 0.5;
    prev = diff;
    L0 += omega * (nL0 - L0);
    L1 += omega * (nL1 - L1);
    Lb0 += omega * (nLb0 - Lb0);
    Lb1 += omega * (nLb1 - Lb1);
  }
  raise(ErrorKind::FixedPointDivergence,
        "frame coupling iteration did not converge" + where(g, i, j));
}

}  // namespace detail

NullFrame integrate_frame(const DNState& state, const GaugeSlice& slice, const DNGrid& grid,
                          const WaveProfile& profile, const Nonlinearity& model,
                          const FrameOptions& opts) {
  validate_grid(grid);
  if (!(state.grid == grid)) raise(ErrorKind::GridMismatch, "state and frame grids differ");
  NullFrame frame(grid);
  detail::FrameContext ctx(grid, state, profile, model, opts, frame);
  detail::load_frame_diagonal(ctx, slice);
  const int N = grid.N();
  for (int k = N + 1; k <= 2 * N; ++k) {
    detail::FirstError err;
#pragma omp parallel for schedule(static)
    for (int i = k - N; i <= N; ++i) {
      try {
        detail::frame_cell(ctx, i, k - i);
      } catch (...) {
        err.capture(i);
      }
    }
    err.rethrow();
  }
  return frame;
}

FrameDeviation frame_deviation(const NullFrame& frame, const WaveProfile& profile,
                               const Nonlinearity& model) {
  const DNGrid& g = frame.grid;
  const double H0 = eval_coeffs(model, 0.0).H;
  FrameDeviation d;
  d.grid = g;
  for (auto* v : {&d.l0, &d.l1, &d.lb0, &d.lb1}) v->assign(g.size(), 0.0);
  const int N = g.N();
  for (int j = 0; j <= N; ++j) {
    const double zp = profile.dzeta(g.ub(j));
    const double a = H0 * zp * zp;
    for (int i = N - j; i <= N; ++i) {
      const std::size_t k = g.index(i, j);
      d.l0[k] = frame.L0[k] - (-1.0 - a);
      d.l1[k] = frame.L1[k] - (1.0 - a);
      d.lb0[k] = frame.Lb0[k] + 1.0;
      d.lb1[k] = frame.Lb1[k] + 1.0;
    }
  }
  return d;
}

FrameDeviation solve_model_system(const WaveProfile& profile, const Nonlinearity& model,
                                  const GaugeSlice& slice, const DNGrid& grid) {
  validate_grid(grid);
  const int N = grid.N();
  if (static_cast<int>(slice.L0.size()) != N + 1) {
    raise(ErrorKind::GridMismatch, "gauge slice does not match grid");
  }
  const double H0 = eval_coeffs(model, 0.0).H;
  const double h = grid.h;
  std::vector<double> k(N + 1), bm(N + 1), bp(N + 1), Lbg0(N + 1), Lbg1(N + 1), K(N + 1, 0.0);
  for (int j = 0; j <= N; ++j) {
    const double zp = profile.dzeta(grid.ub(j)), zpp = profile.d2zeta(grid.ub(j));
    k[j] = H0 * zp * zpp;
    Lbg0[j] = -1.0 - H0 * zp * zp;
    Lbg1[j] = 1.0 - H0 * zp * zp;
    const int d = N - j;  // diagonal node carrying this ubar
    const double lb0 = slice.Lb0[d] + 1.0, lb1 = slice.Lb1[d] + 1.0;
    bm[j] = lb0 - lb1;
    bp[j] = lb0 + lb1;
  }
  for (int j = 1; j <= N; ++j) K[j] = K[j - 1] + 0.5 * h * (k[j - 1] * bm[j - 1] + k[j] * bm[j]);

  FrameDeviation out;
  out.grid = grid;
  for (auto* v : {&out.l0, &out.l1, &out.lb0, &out.lb1}) v->assign(grid.size(), 0.0);
  for (int i = 0; i <= N; ++i) {
    const int j0 = N - i;
    const double l0 = slice.L0[i] - Lbg0[j0], l1 = slice.L1[i] - Lbg1[j0];
    const double D0 = l0 - l1;
    double S = l0 + l1;
    double F_prev = 0.0;
    for (int j = j0; j <= N; ++j) {
      const double D = 2.0 + (D0 - 2.0) * std::exp(-(K[j] - K[j0]));
      const double F = 2.0 * k[j] * D - k[j] * bp[j] * (D - 2.0);
      if (j > j0) S += 0.5 * h * (F_prev + F);
      F_prev = F;
      const std::size_t idx = grid.index(i, j);
      out.l0[idx] = 0.5 * (S + D);
      out.l1[idx] = 0.5 * (S - D);
      out.lb0[idx] = slice.Lb0[N - j] + 1.0;
      out.lb1[idx] = slice.Lb1[N - j] + 1.0;
    }
  }
  return out;
}

}  // namespace nullwave
