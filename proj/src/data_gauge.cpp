#include "nullwave/data_gauge.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "nullwave/errors.hpp"
#include "nullwave/io.hpp"

namespace nullwave {

RectInitialData RectInitialData::background(const WaveProfile& profile) {
  RectInitialData d;
  d.phi0 = [profile](double x) { return profile.zeta(-x); };
  d.phi0p = [profile](double x) { return -profile.dzeta(-x); };
  d.phi0pp = [profile](double x) { return profile.d2zeta(-x); };
  d.phi1 = [profile](double x) { return profile.dzeta(-x); };
  d.phi1p = [profile](double x) { return -profile.d2zeta(-x); };
  d.label = "background(" + profile.label() + ")";
  return d;
}

RectInitialData RectInitialData::perturbed(const WaveProfile& profile, const Perturbation& p) {
  if (p.family == Family::None || p.eps_bar == 0.0) return background(profile);
  const WaveProfile shape = p.family == Family::Bump
                                ? WaveProfile::bump(1.0, p.center, p.width)
                                : WaveProfile::algebraic(1.0, p.gamma);
  const double e = p.eps_bar, v = p.velocity;
  RectInitialData d;
  d.phi0 = [profile, shape, e](double x) { return profile.zeta(-x) + e * shape.zeta(x); };
  d.phi0p = [profile, shape, e](double x) { return -profile.dzeta(-x) + e * shape.dzeta(x); };
  d.phi0pp = [profile, shape, e](double x) { return profile.d2zeta(-x) + e * shape.d2zeta(x); };
  d.phi1 = [profile, shape, e, v](double x) { return profile.dzeta(-x) + e * v * shape.dzeta(x); };
  d.phi1p = [profile, shape, e, v](double x) {
    return -profile.d2zeta(-x) + e * v * shape.d2zeta(x);
  };
  std::ostringstream os;
  os << "background(" << profile.label() << ") + " << e << "*" << shape.label();
  d.label = os.str();
  return d;
}

namespace {

struct DataTable {
  std::vector<std::vector<double>> rows;  // x, phi0, phi0p, phi0pp, phi1, phi1p

  bool locate(double x, std::size_t& k, double& s, double& dx) const {
    if (x < rows.front()[0] || x > rows.back()[0]) return false;
    auto it = std::upper_bound(rows.begin(), rows.end(), x,
                               [](double v, const std::vector<double>& r) { return v < r[0]; });
    k = static_cast<std::size_t>(std::distance(rows.begin(), it));
    k = std::clamp<std::size_t>(k, 1, rows.size() - 1);
    dx = rows[k][0] - rows[k - 1][0];
    s = (x - rows[k - 1][0]) / dx;
    return true;
  }

  // Hermite on column c with slope column m; linear when m < 0.
  double eval(double x, int c, int m, bool& inside) const {
    std::size_t k;
    double s, dx;
    inside = locate(x, k, s, dx);
    if (!inside) return 0.0;
    const auto &a = rows[k - 1], &b = rows[k];
    if (m < 0) return (1.0 - s) * a[c] + s * b[c];
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * a[c] + (s3 - 2 * s2 + s) * dx * a[m] +
           (-2 * s3 + 3 * s2) * b[c] + (s3 - s2) * dx * b[m];
  }
};

}  // namespace

RectInitialData RectInitialData::from_csv(const std::string& path, const WaveProfile& profile) {
  auto rows = read_numeric_csv(path, 6);
  std::sort(rows.begin(), rows.end());
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!(rows[k][0] > rows[k - 1][0])) raise(ErrorKind::IoError, path + ": repeated x value");
  }
  if (rows.size() < 2) raise(ErrorKind::IoError, path + ": need at least two rows");
  auto tab = std::make_shared<const DataTable>(DataTable{std::move(rows)});
  const RectInitialData bg = background(profile);
  auto column = [tab](int c, int m, RectInitialData::Fn fallback) {
    return [tab, c, m, fallback](double x) {
      bool inside = false;
      const double v = tab->eval(x, c, m, inside);
      return inside ? v : fallback(x);
    };
  };
  RectInitialData d;
  d.phi0 = column(1, 2, bg.phi0);
  d.phi0p = column(2, 3, bg.phi0p);
  d.phi0pp = column(3, -1, bg.phi0pp);
  d.phi1 = column(4, 5, bg.phi1);
  d.phi1p = column(5, -1, bg.phi1p);
  d.label = "table(" + path + ")";
  return d;
}

ClosenessCertificate closeness_certificate(const RectInitialData& data,
                                           const WaveProfile& profile, double x_max,
                                           double spacing) {
  ClosenessCertificate c;
  c.gamma_bar = profile.gamma_bar();
  const long n = static_cast<long>(std::llround(x_max / spacing));
  for (long k = -n; k <= n; ++k) {
    const double x = static_cast<double>(k) * spacing;
    const double w = std::pow(1.0 + std::abs(x), 1.0 + c.gamma_bar);
    const double diffs[5] = {
        data.phi0(x) - profile.zeta(-x),     data.phi0p(x) + profile.dzeta(-x),
        data.phi0pp(x) - profile.d2zeta(-x), data.phi1(x) - profile.dzeta(-x),
        data.phi1p(x) + profile.d2zeta(-x),
    };
    for (double d : diffs) c.eps_bar = std::max(c.eps_bar, std::abs(d) * w);
  }
  return c;
}

double solve_phi_tt(const RectInitialData& data, const Nonlinearity& model, double x) {
  const MetricComponents m = acoustic_metric(model, data.phi1(x), data.phi0p(x));
  if (m.gi00 >= 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "g^00 = " << m.gi00 << " >= 0 at x = " << x;
    raise(ErrorKind::SliceNotSpacelike, os.str());
  }
  return -(2.0 * m.gi01 * data.phi1p(x) + m.gi11 * data.phi0pp(x)) / m.gi00;
}

namespace {

std::string at_x(double x) {
  std::ostringstream os;
  os.precision(17);
  os << " at x = " << x;
  return os.str();
}

MetricComponents metric_or_no_root(const Nonlinearity& model, double pt, double px, double x) {
  try {
    return acoustic_metric(model, pt, px);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::HyperbolicityLoss) {
      raise(ErrorKind::NoRealRoot, std::string(e.what()) + at_x(x));
    }
    throw;
  }
}

// Root of a y^2 + b y + c closest to y0 after Newton continuation.
double newton_quadratic(double a, double b, double c, double y) {
  for (int it = 0; it < 6; ++it) {
    const double q = (a * y + b) * y + c;
    const double dq = 2.0 * a * y + b;
    if (dq == 0.0) break;
    y -= q / dq;
  }
  return y;
}

}  // namespace

EikonalRoots solve_eikonal_t0(const RectInitialData& data, const WaveProfile& profile,
                              const Nonlinearity& model, double x) {
  const double bt = profile.dzeta(-x), bx = -profile.dzeta(-x);
  const double pt = data.phi1(x), px = data.phi0p(x);

  // Background roots: ubar_t = 1 and u_t = (1 - a)/(1 + a), a = H(0) zeta'^2.
  const MetricComponents m0 = metric_or_no_root(model, bt, bx, x);
  if (m0.gi00 >= 0.0) raise(ErrorKind::SliceNotSpacelike, "background g^00 >= 0" + at_x(x));
  double yb = (m0.gi01 - std::sqrt(-m0.detgi)) / m0.gi00;
  double yu = (-m0.gi01 - std::sqrt(-m0.detgi)) / m0.gi00;

  constexpr int kSteps = 8;
  MetricComponents m = m0;
  for (int s = 1; s <= kSteps; ++s) {
    const double tau = static_cast<double>(s) / kSteps;
    m = metric_or_no_root(model, bt + tau * (pt - bt), bx + tau * (px - bx), x);
    if (m.gi00 >= 0.0) raise(ErrorKind::SliceNotSpacelike, "g^00 >= 0 on homotopy" + at_x(x));
    // g^{-1}(dubar, dubar) with dubar = (y, -1); g^{-1}(du, du) with du = (y, 1)
    yb = newton_quadratic(m.gi00, -2.0 * m.gi01, m.gi11, yb);
    yu = newton_quadratic(m.gi00, 2.0 * m.gi01, m.gi11, yu);
  }

  const double kappa = -m.detgi;
  if (!(kappa > 0.0)) raise(ErrorKind::NoRealRoot, "negative discriminant" + at_x(x));
  const double sq = std::sqrt(kappa);
  auto snap = [&](double y, double r1, double r2, const char* which) {
    if (std::abs(r1 - r2) <= 1e-8 * std::max(1.0, std::abs(r1))) {
      raise(ErrorKind::RootAmbiguity,
            std::string(which) + " roots coincide to 1e-8" + at_x(x));
    }
    return std::abs(y - r1) <= std::abs(y - r2) ? r1 : r2;
  };
  EikonalRoots r;
  r.dub_t = snap(yb, (m.gi01 - sq) / m.gi00, (m.gi01 + sq) / m.gi00, "d_t ubar");
  r.du_t = snap(yu, (-m.gi01 - sq) / m.gi00, (-m.gi01 + sq) / m.gi00, "d_t u");
  if (!(r.dub_t > 0.0)) raise(ErrorKind::NoRealRoot, "no root with d_t ubar > 0" + at_x(x));
  if (std::abs(r.du_t + r.dub_t) <= 1e-12) {
    raise(ErrorKind::NoRealRoot, "du and dubar are collinear" + at_x(x));
  }
  r.residual_ub = (m.gi00 * r.dub_t - 2.0 * m.gi01) * r.dub_t + m.gi11;
  r.residual_u = (m.gi00 * r.du_t + 2.0 * m.gi01) * r.du_t + m.gi11;
  return r;
}

double u_scale(const WaveProfile& profile, const Nonlinearity& model, double u) {
  const double H0 = eval_coeffs(model, 0.0).H;
  const double zp = profile.dzeta(-u);
  return 1.0 + H0 * zp * zp;
}

DiagonalBuild build_diagonal_data(const RectInitialData& data, const WaveProfile& profile,
                                  const Nonlinearity& model, const DNGrid& grid) {
  validate_grid(grid);
  const int N = grid.N();
  DiagonalBuild out;
  DiagonalData& dd = out.data;
  GaugeSlice& gs = out.slice;
  dd.s.resize(N + 1);
  dd.nodes.resize(N + 1);
  dd.sigma.resize(N + 1);
  for (auto* v : {&gs.x, &gs.du_t, &gs.dub_t, &gs.u_scale, &gs.phi_tt, &gs.L0, &gs.L1, &gs.Lb0,
                  &gs.Lb1, &gs.residual_u, &gs.residual_ub, &gs.cross}) {
    v->resize(N + 1);
  }

  for (int k = 0; k <= N; ++k) {
    const double x = grid.u(k);
    const double ub = grid.ub(N - k);
    const double pt = data.phi1(x), px = data.phi0p(x);
    const double ptx = data.phi1p(x), pxx = data.phi0pp(x);
    const double ptt = solve_phi_tt(data, model, x);
    const EikonalRoots roots = solve_eikonal_t0(data, profile, model, x);
    const double ut = roots.du_t, ubt = roots.dub_t;
    const double inv = 1.0 / (ut + ubt);
    // d_t = ut d_u + ubt d_ub and d_x = d_u - d_ub
    auto d_u = [&](double ft, double fx) { return (ft + ubt * fx) * inv; };
    auto d_ub = [&](double ft, double fx) { return (ft - ut * fx) * inv; };

    const double zp = profile.dzeta(ub), zpp = profile.d2zeta(ub);
    const double Psi = pt + px, Psib = pt - px;
    const double Psi_t = ptt + ptx, Psi_x = ptx + pxx;
    const double Psib_t = ptt - ptx, Psib_x = ptx - pxx;

    NodeWave w;
    w.psi = Psi;
    w.psib = Psib - 2.0 * zp;
    w.xi = data.phi0(x) - profile.zeta(ub);
    w.dpsi_u = d_u(Psi_t, Psi_x);
    w.dpsi_ub = d_ub(Psi_t, Psi_x);
    w.dpsib_u = d_u(Psib_t, Psib_x);
    w.dpsib_ub = d_ub(Psib_t, Psib_x) - 2.0 * zpp;
    w.dxi_u = d_u(pt, px);
    w.dxi_ub = d_ub(pt, px) - zp;

    dd.s[k] = x;
    dd.nodes[k] = w;
    dd.sigma[k] = diagonal_sigma(w, zp);

    const MetricComponents m = acoustic_metric(model, pt, px);
    const double us = u_scale(profile, model, x);
    gs.x[k] = x;
    gs.du_t[k] = ut;
    gs.dub_t[k] = ubt;
    gs.u_scale[k] = us;
    gs.phi_tt[k] = ptt;
    gs.L0[k] = us * (m.gi00 * ut + m.gi01);
    gs.L1[k] = us * (m.gi01 * ut + m.gi11);
    gs.Lb0[k] = m.gi00 * ubt - m.gi01;
    gs.Lb1[k] = m.gi01 * ubt - m.gi11;
    gs.residual_u[k] = roots.residual_u;
    gs.residual_ub[k] = roots.residual_ub;
    gs.cross[k] = us * (m.gi00 * ut * ubt + m.gi01 * (ubt - ut) - m.gi11);
  }
  return out;
}

}  // namespace nullwave
