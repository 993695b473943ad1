#include <algorithm>
#include <cmath>

#include "dn_cell.hpp"
#include "nullwave/errors.hpp"
#include "parallel_util.hpp"

namespace nullwave {

void validate(const PicardConfig& cfg) {
  if (!(cfg.delta > 0.0)) raise(ErrorKind::DomainError, "Picard delta must be positive");
  if (!(cfg.tol > 0.0)) raise(ErrorKind::DomainError, "Picard tol must be positive");
  if (cfg.max_iter < 1) raise(ErrorKind::DomainError, "Picard max_iter must be >= 1");
}

namespace {

struct Profiles {
  std::vector<double> zp, zpp;
  Profiles(const DNGrid& g, const WaveProfile& p) : zp(g.n_ub), zpp(g.n_ub) {
    for (int j = 0; j < g.n_ub; ++j) {
      zp[j] = p.dzeta(g.ub(j));
      zpp[j] = p.d2zeta(g.ub(j));
    }
  }
};

// Solves d_u d_ub F = src on the triangle with the data on the diagonal, using
// the march's cell quadrature with the source known everywhere.
void integrate_source(const DNGrid& g, const DiagonalData& data, Field val, Field du, Field dub,
                      const std::vector<double>& src, DNState& out) {
  const int N = g.N();
  auto& V = out[val];
  auto& U = out[du];
  auto& B = out[dub];
  for (int k = 0; k <= N; ++k) {
    const NodeWave& w = data.nodes[k];
    const std::size_t idx = g.index(k, N - k);
    switch (val) {
      case Field::Psi:
        V[idx] = w.psi, U[idx] = w.dpsi_u, B[idx] = w.dpsi_ub;
        break;
      case Field::Psib:
        V[idx] = w.psib, U[idx] = w.dpsib_u, B[idx] = w.dpsib_ub;
        break;
      default:
        V[idx] = w.xi, U[idx] = w.dxi_u, B[idx] = w.dxi_ub;
        break;
    }
  }
  for (int k = N + 1; k <= 2 * N; ++k) {
#pragma omp parallel for schedule(static)
    for (int i = k - N; i <= N; ++i) {
      const int j = k - i;
      const std::size_t n = g.index(i, j), w = g.index(i - 1, j), s = g.index(i, j - 1);
      const bool has_sw = g.active(i - 1, j - 1);
      const std::size_t sw = has_sw ? g.index(i - 1, j - 1) : 0;
      const detail::CellTriple W{V[w], U[w], B[w]}, S{V[s], U[s], B[s]};
      const detail::CellTriple SW = has_sw ? detail::CellTriple{V[sw], U[sw], B[sw]}
                                           : detail::CellTriple{0.0, 0.0, 0.0};
      const detail::CellTriple res = detail::cell_update(
          W, S, has_sw ? &SW : nullptr, src[n], src[w], src[s], has_sw ? src[sw] : 0.0, g.h);
      V[n] = res.val;
      U[n] = res.du;
      B[n] = res.dub;
    }
  }
}

// Mixed-derivative sources at every active node for a composite state.
template <class Pick>
std::vector<double> sources(const DNGrid& g, const Profiles& pr, const Nonlinearity& model,
                            const DNState& psi_from, const DNState& psib_from, Pick pick) {
  std::vector<double> src(g.size(), 0.0);
  const int N = g.N();
  detail::FirstError err;
#pragma omp parallel for schedule(static)
  for (int i = 0; i <= N; ++i) {
    for (int j = N - i; j <= N; ++j) {
      const NodeWave a = psi_from.node(i, j);
      const NodeWave b = psib_from.node(i, j);
      NodeWave w = a;
      w.psib = b.psib;
      w.dpsib_u = b.dpsib_u;
      w.dpsib_ub = b.dpsib_ub;
      try {
        src[g.index(i, j)] = pick(rhs_wave(w, pr.zp[j], pr.zpp[j], model));
      } catch (...) {
        err.capture(static_cast<long>(g.index(i, j)));
      }
    }
  }
  err.rethrow();
  return src;
}

double weight(double x, double gamma_bar) { return std::pow(1.0 + std::abs(x), 1.0 + gamma_bar); }

}  // namespace

DNState picard_apply(const DNState& input, const DNGrid& grid, const DiagonalData& data,
                     const WaveProfile& profile, const Nonlinearity& model, PicardOrder order) {
  validate_grid(grid);
  if (!(input.grid == grid)) raise(ErrorKind::GridMismatch, "Picard input on a different grid");
  if (static_cast<int>(data.nodes.size()) != grid.N() + 1) {
    raise(ErrorKind::GridMismatch, "diagonal data does not match grid");
  }
  const Profiles pr(grid, profile);
  DNState out(grid);
  auto r_psi = [](const WaveRhs& r) { return r.r_psi; };
  auto r_psib = [](const WaveRhs& r) { return r.r_psib; };
  if (order == PicardOrder::PsiFirst) {
    integrate_source(grid, data, Field::Psi, Field::DpsiU, Field::DpsiUb,
                     sources(grid, pr, model, input, input, r_psi), out);
    integrate_source(grid, data, Field::Psib, Field::DpsibU, Field::DpsibUb,
                     sources(grid, pr, model, out, input, r_psib), out);
  } else {
    integrate_source(grid, data, Field::Psib, Field::DpsibU, Field::DpsibUb,
                     sources(grid, pr, model, input, input, r_psib), out);
    integrate_source(grid, data, Field::Psi, Field::DpsiU, Field::DpsiUb,
                     sources(grid, pr, model, input, out, r_psi), out);
  }
  const int N = grid.N();
  for (int i = 0; i <= N; ++i) {
    for (int j = N - i; j <= N; ++j) {
      const std::size_t k = grid.index(i, j);
      out[Field::Sigma][k] = -out[Field::Psi][k] * (2.0 * pr.zp[j] + out[Field::Psib][k]);
    }
  }
  return out;
}

double picard_metric(const DNState& a, const DNState& b, double gamma_bar) {
  if (!(a.grid == b.grid)) raise(ErrorKind::GridMismatch, "picard_metric on different grids");
  const DNGrid& g = a.grid;
  const int N = g.N();
  double d = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double wu = weight(g.u(i), gamma_bar);
    for (int j = N - i; j <= N; ++j) {
      const double wub = weight(g.ub(j), gamma_bar);
      const std::size_t k = g.index(i, j);
      auto diff = [&](Field f) { return std::abs(a[f][k] - b[f][k]); };
      d = std::max({d, diff(Field::Psi), diff(Field::Psib), wu * diff(Field::DpsiU),
                    wu * diff(Field::DpsibU), wub * diff(Field::DpsiUb),
                    wub * diff(Field::DpsibUb)});
    }
  }
  return d;
}

bool in_ball(const DNState& s, double delta, double gamma_bar) {
  const DNGrid& g = s.grid;
  const int N = g.N();
  const double d2 = delta * delta;
  for (int i = 0; i <= N; ++i) {
    const double wu = weight(g.u(i), gamma_bar);
    for (int j = N - i; j <= N; ++j) {
      const double wub = weight(g.ub(j), gamma_bar);
      const std::size_t k = g.index(i, j);
      if (std::abs(s[Field::Psi][k]) > d2 || std::abs(s[Field::Psib][k]) > delta ||
          wu * std::abs(s[Field::DpsiU][k]) > d2 || wu * std::abs(s[Field::DpsibU][k]) > delta ||
          wub * std::abs(s[Field::DpsiUb][k]) > d2 ||
          wub * std::abs(s[Field::DpsibUb][k]) > delta) {
        return false;
      }
    }
  }
  return true;
}

PicardSolveResult picard_solve(const DNGrid& grid, const DiagonalData& data,
                               const WaveProfile& profile, const Nonlinearity& model,
                               const PicardConfig& cfg) {
  validate(cfg);
  PicardSolveResult res;
  res.state = DNState(grid);
  const double gb = profile.gamma_bar();
  for (int it = 0; it < cfg.max_iter; ++it) {
    DNState next = picard_apply(res.state, grid, data, profile, model, cfg.order);
    const double inc = picard_metric(next, res.state, gb);
    res.state = std::move(next);
    res.iterations = it + 1;
    res.increments.push_back(inc);
    if (!std::isfinite(inc)) {
      raise(ErrorKind::FixedPointDivergence, "Picard increment is not finite at iteration " +
                                                 std::to_string(it + 1));
    }
    if (inc <= cfg.tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

DNState picard_seed(const DNGrid& grid, double delta, double gamma_bar, double alpha,
                    double beta, double phase_psi, double phase_psib, double omega) {
  // E' = (1+|x|)^(-1-gamma), so omega <= 1 keeps the derivative envelopes.
  auto E = [gamma_bar](double x) {
    const double m = (1.0 - std::pow(1.0 + std::abs(x), -gamma_bar)) / gamma_bar;
    return x < 0.0 ? -m : m;
  };
  auto dE = [gamma_bar](double x) { return std::pow(1.0 + std::abs(x), -1.0 - gamma_bar); };
  DNState s(grid);
  const int N = grid.N();
  const double A = alpha * delta * delta, B = beta * delta;
  for (int i = 0; i <= N; ++i) {
    const double u = grid.u(i), Eu = E(u), dEu = dE(u);
    for (int j = N - i; j <= N; ++j) {
      const double ub = grid.ub(j), Eub = E(ub), dEub = dE(ub);
      const std::size_t k = grid.index(i, j);
      const double a = std::sin(phase_psi + omega * Eu), da = omega * dEu * std::cos(phase_psi + omega * Eu);
      const double b = std::cos(phase_psi - omega * Eub), db = omega * dEub * std::sin(phase_psi - omega * Eub);
      const double c = std::cos(phase_psib + omega * Eu), dc = -omega * dEu * std::sin(phase_psib + omega * Eu);
      const double e = std::sin(phase_psib - omega * Eub), de = -omega * dEub * std::cos(phase_psib - omega * Eub);
      s[Field::Psi][k] = A * a * b;
      s[Field::DpsiU][k] = A * da * b;
      s[Field::DpsiUb][k] = A * a * db;
      s[Field::Psib][k] = B * c * e;
      s[Field::DpsibU][k] = B * dc * e;
      s[Field::DpsibUb][k] = B * c * de;
    }
  }
  return s;
}

ContractionReport contraction_ratio(const DNGrid& grid, const DiagonalData& data,
                                    const WaveProfile& profile, const Nonlinearity& model,
                                    const PicardConfig& cfg) {
  validate(cfg);
  const double gb = profile.gamma_bar();
  const double dl = cfg.delta;
  ContractionReport rep;
  rep.delta = dl;
  rep.eps0 = diagonal_eps0(data, gb);
  // delta is usually set at equality, so allow for the rounding in sqrt
  rep.smallness_relation = 6.0 * (1.0 + 1.0 / gb) * rep.eps0 <= dl * dl * (1.0 + 1e-12);
  const double M0 = range_certificate(model, default_m0(model)).M0;
  const double q = 1.0 + 1.0 / gb;
  rep.delta_bound = 48.0 * M0 * profile.M_zeta() * q * q * dl <= 1.0;

  struct SeedArgs {
    double alpha, beta, phase_psi, phase_psib;
  };
  // The first three pairs differ in psi only.
  const std::pair<SeedArgs, SeedArgs> pairs[] = {
      {{0.5, 0.5, 0.3, 0.7}, {0.8, 0.5, 0.3, 0.7}},
      {{0.9, 0.4, 1.1, 0.2}, {0.2, 0.4, 2.0, 0.2}},
      {{0.6, 0.7, 0.0, 1.3}, {-0.6, 0.7, 0.0, 1.3}},
      {{0.5, 0.9, 0.4, 0.4}, {0.3, 0.1, 1.7, 2.9}},
      {{0.7, 0.8, 0.9, 0.5}, {0.7, -0.3, 0.9, 2.2}},
      {{0.0, 0.0, 0.0, 0.0}, {0.9, 0.9, 0.1, 0.1}},
  };
  for (const auto& [pa, pb] : pairs) {
    const DNState a = picard_seed(grid, dl, gb, pa.alpha, pa.beta, pa.phase_psi, pa.phase_psib);
    const DNState b = picard_seed(grid, dl, gb, pb.alpha, pb.beta, pb.phase_psi, pb.phase_psib);
    const DNState Ta = picard_apply(a, grid, data, profile, model, cfg.order);
    const DNState Tb = picard_apply(b, grid, data, profile, model, cfg.order);
    const double dab = picard_metric(a, b, gb);
    const double ratio = dab > 0.0 ? picard_metric(Ta, Tb, gb) / dab : 0.0;
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.in_ball = rep.in_ball && in_ball(Ta, dl, gb) && in_ball(Tb, dl, gb);
  }
  return rep;
}

}  // namespace nullwave
