#include "nullwave/background.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"
#include "nullwave/io.hpp"
#include "nullwave/quadrature.hpp"

namespace nullwave {

double Envelope::eval(double x) const { return eps / std::pow(1.0 + std::abs(x), 1.0 + gamma); }

double envelope_integral(const Envelope& e) {
  if (!(e.gamma > 0.0)) raise(ErrorKind::DomainError, "envelope_integral needs gamma > 0");
  if (e.eps == 0.0) return 0.0;
  return 2.0 * integrate_half_line([&](double s) { return e.eval(s); }, 0.0);
}

double measure_envelope_constant(const std::function<double(double)>& g, double gamma,
                                 double x_max, double spacing) {
  const long n = static_cast<long>(std::llround(x_max / spacing));
  double m = 0.0;
  for (long k = -n; k <= n; ++k) {
    const double x = static_cast<double>(k) * spacing;
    m = std::max(m, std::abs(g(x)) * std::pow(1.0 + std::abs(x), 1.0 + gamma));
  }
  return m;
}

WaveProfile::WaveProfile(ProfileKind kind, Fn z, Fn dz, Fn d2z, double gamma_bar,
                         std::string label)
    : kind_(kind),
      zeta_(std::move(z)),
      dzeta_(std::move(dz)),
      d2zeta_(std::move(d2z)),
      gamma_bar_(gamma_bar),
      label_(std::move(label)) {
  if (!(gamma_bar_ > 0.0)) raise(ErrorKind::DomainError, "profile gamma_bar must be positive");
  M_zeta_ = std::max({measure_envelope_constant(zeta_, gamma_bar_),
                      measure_envelope_constant(dzeta_, gamma_bar_),
                      measure_envelope_constant(d2zeta_, gamma_bar_)});
}

WaveProfile WaveProfile::zero(double gamma_bar) {
  auto z = [](double) { return 0.0; };
  return WaveProfile(ProfileKind::Zero, z, z, z, gamma_bar, "zero");
}

WaveProfile WaveProfile::bump(double amplitude, double center, double width, double gamma_bar) {
  if (!(width > 0.0)) raise(ErrorKind::DomainError, "bump width must be positive");
  const double A = amplitude, c = center, w = width;
  auto z = [=](double x) {
    const double r = (x - c) / w;
    if (std::abs(r) >= 1.0) return 0.0;
    const double q = 1.0 - r * r;
    const double q2 = q * q;
    return A * q2 * q2 * q2;
  };
  auto dz = [=](double x) {
    const double r = (x - c) / w;
    if (std::abs(r) >= 1.0) return 0.0;
    const double q = 1.0 - r * r;
    const double q2 = q * q;
    return -12.0 * A * r * q2 * q2 * q / w;
  };
  auto d2z = [=](double x) {
    const double r = (x - c) / w;
    if (std::abs(r) >= 1.0) return 0.0;
    const double q = 1.0 - r * r;
    const double q2 = q * q;
    return -12.0 * A * q2 * q2 * (1.0 - 11.0 * r * r) / (w * w);
  };
  std::ostringstream os;
  os << "bump(A=" << A << ",center=" << c << ",width=" << w << ")";
  return WaveProfile(ProfileKind::Bump, z, dz, d2z, gamma_bar, os.str());
}

WaveProfile WaveProfile::algebraic(double amplitude, double gamma) {
  if (!(gamma > 0.0)) raise(ErrorKind::DomainError, "algebraic profile needs gamma > 0");
  const double A = amplitude;
  const double p = 0.5 * (1.0 + gamma);
  auto z = [=](double x) { return A * std::pow(1.0 + x * x, -p); };
  auto dz = [=](double x) { return -2.0 * p * A * x * std::pow(1.0 + x * x, -p - 1.0); };
  auto d2z = [=](double x) {
    return -2.0 * p * A * std::pow(1.0 + x * x, -p - 2.0) * (1.0 - (2.0 * p + 1.0) * x * x);
  };
  std::ostringstream os;
  os << "algebraic(A=" << A << ",gamma=" << gamma << ")";
  return WaveProfile(ProfileKind::Algebraic, z, dz, d2z, gamma, os.str());
}

namespace {

struct HermiteTable {
  std::vector<ProfileTableRow> rows;

  // Locates the interval containing x; returns false outside the table.
  bool locate(double x, std::size_t& k, double& s, double& dx) const {
    if (x < rows.front().x || x > rows.back().x) return false;
    auto it = std::upper_bound(rows.begin(), rows.end(), x,
                               [](double v, const ProfileTableRow& r) { return v < r.x; });
    k = static_cast<std::size_t>(std::distance(rows.begin(), it));
    if (k == 0) k = 1;
    if (k >= rows.size()) k = rows.size() - 1;
    dx = rows[k].x - rows[k - 1].x;
    s = (x - rows[k - 1].x) / dx;
    return true;
  }

  static double hermite(double s, double dx, double y0, double m0, double y1, double m1) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * dx * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * dx * m1;
  }
};

}  // namespace

WaveProfile WaveProfile::table(std::vector<ProfileTableRow> rows, double gamma_bar) {
  if (rows.size() < 2) raise(ErrorKind::DomainError, "profile table needs at least two rows");
  std::sort(rows.begin(), rows.end(),
            [](const ProfileTableRow& a, const ProfileTableRow& b) { return a.x < b.x; });
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!(rows[k].x > rows[k - 1].x)) raise(ErrorKind::DomainError, "profile table has repeated x");
  }
  auto tab = std::make_shared<const HermiteTable>(HermiteTable{std::move(rows)});
  auto z = [tab](double x) {
    std::size_t k;
    double s, dx;
    if (!tab->locate(x, k, s, dx)) return 0.0;
    const auto &a = tab->rows[k - 1], &b = tab->rows[k];
    return HermiteTable::hermite(s, dx, a.zeta, a.dzeta, b.zeta, b.dzeta);
  };
  auto dz = [tab](double x) {
    std::size_t k;
    double s, dx;
    if (!tab->locate(x, k, s, dx)) return 0.0;
    const auto &a = tab->rows[k - 1], &b = tab->rows[k];
    return HermiteTable::hermite(s, dx, a.dzeta, a.d2zeta, b.dzeta, b.d2zeta);
  };
  auto d2z = [tab](double x) {
    std::size_t k;
    double s, dx;
    if (!tab->locate(x, k, s, dx)) return 0.0;
    const auto &a = tab->rows[k - 1], &b = tab->rows[k];
    return (1.0 - s) * a.d2zeta + s * b.d2zeta;
  };
  return WaveProfile(ProfileKind::Table, z, dz, d2z, gamma_bar, "table");
}

WaveProfile WaveProfile::table_from_csv(const std::string& path, double gamma_bar) {
  const auto data = read_numeric_csv(path, 4);
  std::vector<ProfileTableRow> rows;
  rows.reserve(data.size());
  for (const auto& r : data) rows.push_back({r[0], r[1], r[2], r[3]});
  WaveProfile p = table(std::move(rows), gamma_bar);
  p.label_ = "table(" + path + ")";
  return p;
}

WaveProfile WaveProfile::custom(Fn zeta, Fn dzeta, Fn d2zeta, double gamma_bar,
                                std::string label) {
  return WaveProfile(ProfileKind::Custom, std::move(zeta), std::move(dzeta), std::move(d2zeta),
                     gamma_bar, std::move(label));
}

WaveProfile WaveProfile::scaled(double factor) const {
  Fn z = [f = zeta_, factor](double x) { return factor * f(x); };
  Fn dz = [f = dzeta_, factor](double x) { return factor * f(x); };
  Fn d2z = [f = d2zeta_, factor](double x) { return factor * f(x); };
  std::ostringstream os;
  os << factor << "*" << label_;
  return WaveProfile(kind_, z, dz, d2z, gamma_bar_, os.str());
}

HyperbolicityReport hyperbolicity_check(const WaveProfile& profile, const Nonlinearity& model,
                                        double x_max, double spacing) {
  const double H0 = eval_coeffs(model, 0.0).H;
  const long n = static_cast<long>(std::llround(x_max / spacing));
  double inf_term = 0.0;  // zeta' -> 0 at infinity, so 0 is in the closure
  for (long k = -n; k <= n; ++k) {
    const double zp = profile.dzeta(static_cast<double>(k) * spacing);
    inf_term = std::min(inf_term, H0 * zp * zp);
  }
  // Tail beyond the sample is controlled by the envelope of zeta'.
  const double tail = Envelope{profile.M_zeta(), profile.gamma_bar()}.eval(x_max);
  inf_term = std::min(inf_term, std::min(H0, 0.0) * tail * tail);
  HyperbolicityReport r;
  r.margin = 1.0 + inf_term;
  r.pass = r.margin > 0.0;
  return r;
}

double phase_function(const WaveProfile& profile, const Nonlinearity& model, double ubar) {
  const double H0 = eval_coeffs(model, 0.0).H;
  if (H0 == 0.0) return 0.0;
  const double integral = adaptive_simpson(
      [&](double s) {
        const double zp = profile.dzeta(s);
        return zp * zp;
      },
      0.0, ubar, 1e-10);
  return -H0 * integral;
}

BackgroundFrame background_frame(const WaveProfile& profile, const Nonlinearity& model,
                                 double ubar) {
  const double H0 = eval_coeffs(model, 0.0).H;
  const double zp = profile.dzeta(ubar);
  BackgroundFrame b{};
  b.L0 = -1.0 - H0 * zp * zp;
  b.L1 = 1.0 - H0 * zp * zp;
  b.Lb0 = -1.0;
  b.Lb1 = -1.0;
  b.Omega = -0.5;
  b.Z = phase_function(profile, model, ubar);
  return b;
}

}  // namespace nullwave
