#include <algorithm>
#include <cmath>
#include <sstream>

#include "dn_cell.hpp"
#include "nullwave/errors.hpp"
#include "parallel_util.hpp"

namespace nullwave {

const char* field_name(Field f) {
  switch (f) {
    case Field::Psi: return "psi";
    case Field::Psib: return "psib";
    case Field::Sigma: return "sigma";
    case Field::Xi: return "xi";
    case Field::DpsiU: return "dpsi_u";
    case Field::DpsiUb: return "dpsi_ub";
    case Field::DpsibU: return "dpsib_u";
    case Field::DpsibUb: return "dpsib_ub";
    case Field::DxiU: return "dxi_u";
    case Field::DxiUb: return "dxi_ub";
  }
  return "?";
}

DNState::DNState(const DNGrid& g) : grid(g) {
  for (auto& f : fields) f.assign(g.size(), 0.0);
}

NodeWave DNState::node(int i, int j) const {
  const std::size_t k = grid.index(i, j);
  NodeWave w;
  w.psi = (*this)[Field::Psi][k];
  w.psib = (*this)[Field::Psib][k];
  w.xi = (*this)[Field::Xi][k];
  w.dpsi_u = (*this)[Field::DpsiU][k];
  w.dpsi_ub = (*this)[Field::DpsiUb][k];
  w.dpsib_u = (*this)[Field::DpsibU][k];
  w.dpsib_ub = (*this)[Field::DpsibUb][k];
  w.dxi_u = (*this)[Field::DxiU][k];
  w.dxi_ub = (*this)[Field::DxiUb][k];
  return w;
}

void DNState::set_node(int i, int j, const NodeWave& w, double sigma) {
  const std::size_t k = grid.index(i, j);
  (*this)[Field::Psi][k] = w.psi;
  (*this)[Field::Psib][k] = w.psib;
  (*this)[Field::Sigma][k] = sigma;
  (*this)[Field::Xi][k] = w.xi;
  (*this)[Field::DpsiU][k] = w.dpsi_u;
  (*this)[Field::DpsiUb][k] = w.dpsi_ub;
  (*this)[Field::DpsibU][k] = w.dpsib_u;
  (*this)[Field::DpsibUb][k] = w.dpsib_ub;
  (*this)[Field::DxiU][k] = w.dxi_u;
  (*this)[Field::DxiUb][k] = w.dxi_ub;
}

double diagonal_sigma(const NodeWave& w, double dzeta_ub) {
  return -w.psi * (2.0 * dzeta_ub + w.psib);
}

double sigma_du(const NodeWave& w, double dzeta) {
  return -w.dpsi_u * (2.0 * dzeta + w.psib) - w.psi * w.dpsib_u;
}

double sigma_dub(const NodeWave& w, double dzeta, double d2zeta) {
  return -w.dpsi_ub * (2.0 * dzeta + w.psib) - w.psi * (2.0 * d2zeta + w.dpsib_ub);
}

WaveRhs rhs_wave(const NodeWave& w, double dzeta, double d2zeta, const Nonlinearity& model) {
  WaveRhs out;
  out.sigma = diagonal_sigma(w, dzeta);
  const CoefficientBundle c = eval_coeffs(model, out.sigma);
  const double su = sigma_du(w, dzeta);
  const double sub = sigma_dub(w, dzeta, d2zeta);
  out.r_psi = -0.5 * c.G * (su * w.dpsi_ub + w.dpsi_u * sub);
  out.r_psib = -c.G * su * d2zeta - 0.5 * c.G * (su * w.dpsib_ub + w.dpsib_u * sub);
  out.r_xi = -0.25 * out.sigma * c.kappa * c.Hp * (su * w.dxi_ub + w.dxi_u * sub + dzeta * su);
  return out;
}

double diagonal_eps0(const DiagonalData& data, double gamma_bar) {
  double eps = 0.0;
  for (std::size_t k = 0; k < data.s.size(); ++k) {
    const NodeWave& w = data.nodes[k];
    const double weight = std::pow(1.0 + std::abs(data.s[k]), 1.0 + gamma_bar);
    for (double v : {w.psi, w.psib, w.xi, w.dpsi_u, w.dpsi_ub, w.dpsib_u, w.dpsib_ub, w.dxi_u,
                     w.dxi_ub}) {
      eps = std::max(eps, std::abs(v) * weight);
    }
  }
  return eps;
}

DiagonalData diagonal_of(const DNState& state, const WaveProfile& profile) {
  const DNGrid& g = state.grid;
  const int N = g.N();
  DiagonalData d;
  for (int k = 0; k <= N; ++k) {
    d.s.push_back(g.u(k));
    d.nodes.push_back(state.node(k, N - k));
    d.sigma.push_back(diagonal_sigma(d.nodes.back(), profile.dzeta(g.ub(N - k))));
  }
  return d;
}

namespace detail {

MarchContext::MarchContext(const DNGrid& g, const Nonlinearity& m, const MarchOptions& o,
                           const WaveProfile& profile, DNState& s)
    : grid(g), model(m), opts(o), state(s) {
  zp.resize(g.n_ub);
  zpp.resize(g.n_ub);
  for (int j = 0; j < g.n_ub; ++j) {
    zp[j] = profile.dzeta(g.ub(j));
    zpp[j] = profile.d2zeta(g.ub(j));
  }
  for (auto& v : r) v.assign(g.size(), 0.0);
}

namespace {

std::string where(const DNGrid& g, int i, int j) {
  std::ostringstream os;
  os.precision(17);
  os << " at node (" << i << ", " << j << "), (u, ubar) = (" << g.u(i) << ", " << g.ub(j) << ")";
  return os.str();
}

constexpr Field kVal[3] = {Field::Psi, Field::Psib, Field::Xi};
constexpr Field kDu[3] = {Field::DpsiU, Field::DpsibU, Field::DxiU};
constexpr Field kDub[3] = {Field::DpsiUb, Field::DpsibUb, Field::DxiUb};

CellTriple triple(const DNState& s, int c, std::size_t k) {
  return {s[kVal[c]][k], s[kDu[c]][k], s[kDub[c]][k]};
}

}  // namespace

void load_diagonal(MarchContext& ctx, const DiagonalData& data) {
  const DNGrid& g = ctx.grid;
  const int N = g.N();
  if (static_cast<int>(data.nodes.size()) != N + 1) {
    raise(ErrorKind::GridMismatch, "diagonal data has " + std::to_string(data.nodes.size()) +
                                       " nodes, grid needs " + std::to_string(N + 1));
  }
  for (int k = 0; k <= N; ++k) {
    const int j = N - k;
    const NodeWave& w = data.nodes[k];
    WaveRhs rr;
    try {
      rr = rhs_wave(w, ctx.zp[j], ctx.zpp[j], ctx.model);
    } catch (const Error& e) {
      throw Error(e.kind(), e.what() + where(g, k, j));
    }
    ctx.state.set_node(k, j, w, rr.sigma);
    const std::size_t idx = g.index(k, j);
    ctx.r[0][idx] = rr.r_psi;
    ctx.r[1][idx] = rr.r_psib;
    ctx.r[2][idx] = rr.r_xi;
  }
}

void march_cell(MarchContext& ctx, int i, int j) {
  const DNGrid& g = ctx.grid;
  const DNState& st = ctx.state;
  const double h = g.h;
  const std::size_t n = g.index(i, j), w = g.index(i - 1, j), s = g.index(i, j - 1);
  const bool has_sw = g.active(i - 1, j - 1);
  const std::size_t sw = has_sw ? g.index(i - 1, j - 1) : 0;

  CellTriple W[3], S[3], SW[3];
  double rW[3], rS[3], rSW[3] = {0.0, 0.0, 0.0}, rN[3];
  for (int c = 0; c < 3; ++c) {
    W[c] = triple(st, c, w);
    S[c] = triple(st, c, s);
    rW[c] = ctx.r[c][w];
    rS[c] = ctx.r[c][s];
    if (has_sw) {
      SW[c] = triple(st, c, sw);
      rSW[c] = ctx.r[c][sw];
      rN[c] = rW[c] + rS[c] - rSW[c];
    } else {
      rN[c] = 0.5 * (rW[c] + rS[c]);
    }
  }

  auto corner = [&](const double* rc) {
    NodeWave nw;
    CellTriple out[3];
    for (int c = 0; c < 3; ++c) {
      out[c] = cell_update(W[c], S[c], has_sw ? &SW[c] : nullptr, rc[c], rW[c], rS[c], rSW[c], h);
    }
    nw.psi = out[0].val;
    nw.dpsi_u = out[0].du;
    nw.dpsi_ub = out[0].dub;
    nw.psib = out[1].val;
    nw.dpsib_u = out[1].du;
    nw.dpsib_ub = out[1].dub;
    nw.xi = out[2].val;
    nw.dxi_u = out[2].du;
    nw.dxi_ub = out[2].dub;
    return nw;
  };

  double omega = 1.0;
  double prev = INFINITY;
  for (int it = 0; it < ctx.opts.max_inner; ++it) {
    const NodeWave nw = corner(rN);
    WaveRhs rr;
    try {
      rr = rhs_wave(nw, ctx.zp[j], ctx.zpp[j], ctx.model);
    } catch (const Error& e) {
      throw Error(e.kind(), e.what() + where(g, i, j));
    }
    const double rnew[3] = {rr.r_psi, rr.r_psib, rr.r_xi};
    double diff = 0.0;
    for (int c = 0; c < 3; ++c) diff = std::max(diff, std::abs(rnew[c] - rN[c]) * h);
    if (!std::isfinite(diff)) break;
    if (diff <= ctx.opts.inner_tol) {
      const NodeWave fin = corner(rnew);
      ctx.state.set_node(i, j, fin, diagonal_sigma(fin, ctx.zp[j]));
      for (int c = 0; c < 3; ++c) ctx.r[c][n] = rnew[c];
      return;
    }
    if (diff > prev) omega *= 0.5;
    prev = diff;
    for (int c = 0; c < 3; ++c) rN[c] += omega * (rnew[c] - rN[c]);
  }
  raise(ErrorKind::InnerFixedPointDivergence,
        "corner iteration did not reach tolerance in " + std::to_string(ctx.opts.max_inner) +
            " iterations" + where(g, i, j));
}

}  // namespace detail

DNState march(const DNGrid& grid, const DiagonalData& data, const WaveProfile& profile,
              const Nonlinearity& model, const MarchOptions& opts) {
  validate_grid(grid);
  DNState state(grid);
  detail::MarchContext ctx(grid, model, opts, profile, state);
  detail::load_diagonal(ctx, data);
  const int N = grid.N();
  for (int k = N + 1; k <= 2 * N; ++k) {
    const int i_lo = k - N, i_hi = N;
    detail::FirstError err;
#pragma omp parallel for schedule(static)
    for (int i = i_lo; i <= i_hi; ++i) {
      try {
        detail::march_cell(ctx, i, k - i);
      } catch (...) {
        err.capture(i);
      }
    }
    err.rethrow();
  }
  return state;
}

}  // namespace nullwave
