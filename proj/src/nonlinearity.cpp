#include "nullwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

Nonlinearity Nonlinearity::linear() { return {ModelKind::Linear, {0.0, 0.0, 0.0}}; }

Nonlinearity Nonlinearity::membrane() { return {ModelKind::Membrane, {0.0, 0.0, 0.0}}; }

Nonlinearity Nonlinearity::polynomial(double a, double b, double c) {
  return {ModelKind::Polynomial, {a, b, c}};
}

std::string Nonlinearity::name() const {
  switch (kind_) {
    case ModelKind::Linear: return "linear";
    case ModelKind::Membrane: return "membrane";
    case ModelKind::Polynomial: {
      std::ostringstream os;
      os.precision(17);
      os << "polynomial(" << coeffs_[0] << "," << coeffs_[1] << "," << coeffs_[2] << ")";
      return os.str();
    }
  }
  return "unknown";
}

bool Nonlinearity::defined_at(double s) const noexcept {
  if (!std::isfinite(s)) return false;
  return kind_ != ModelKind::Membrane || s > -1.0;
}

double Nonlinearity::f(double s) const {
  switch (kind_) {
    case ModelKind::Linear: return 0.0;
    case ModelKind::Membrane: return -0.5 * std::log1p(s);
    case ModelKind::Polynomial: return s * (coeffs_[0] + s * (coeffs_[1] + s * coeffs_[2]));
  }
  return 0.0;
}

double Nonlinearity::df(double s) const {
  switch (kind_) {
    case ModelKind::Linear: return 0.0;
    case ModelKind::Membrane: return -0.5 / (1.0 + s);
    case ModelKind::Polynomial: return coeffs_[0] + s * (2.0 * coeffs_[1] + 3.0 * coeffs_[2] * s);
  }
  return 0.0;
}

double Nonlinearity::d2f(double s) const {
  switch (kind_) {
    case ModelKind::Linear: return 0.0;
    case ModelKind::Membrane: return 0.5 / ((1.0 + s) * (1.0 + s));
    case ModelKind::Polynomial: return 2.0 * coeffs_[1] + 6.0 * coeffs_[2] * s;
  }
  return 0.0;
}

double Nonlinearity::d3f(double s) const {
  switch (kind_) {
    case ModelKind::Linear: return 0.0;
    case ModelKind::Membrane: {
      const double p = 1.0 + s;
      return -1.0 / (p * p * p);
    }
    case ModelKind::Polynomial: return 6.0 * coeffs_[2];
  }
  return 0.0;
}

CoefficientBundle eval_coeffs(const Nonlinearity& model, double sigma) {
  if (!model.defined_at(sigma)) {
    std::ostringstream os;
    os << model.name() << " undefined at sigma=" << sigma;
    raise(ErrorKind::DomainError, os.str());
  }
  CoefficientBundle c{};
  c.sigma = sigma;
  c.f = model.f(sigma);
  c.fp = model.df(sigma);
  c.fpp = model.d2f(sigma);
  c.kappa = 1.0 + 2.0 * c.fp * sigma;
  if (!(c.kappa > 0.0)) {
    std::ostringstream os;
    os << "kappa=" << c.kappa << " at sigma=" << sigma;
    raise(ErrorKind::HyperbolicityLoss, os.str());
  }
  c.G = (c.fpp * sigma + c.fp) / c.kappa + c.fp;
  c.H = -2.0 * c.fp / c.kappa;
  const double dkappa = 2.0 * c.fpp * sigma + 2.0 * c.fp;
  c.Hp = -2.0 * (c.fpp * c.kappa - c.fp * dkappa) / (c.kappa * c.kappa);
  return c;
}

MetricComponents acoustic_metric(const Nonlinearity& model, double phi_t, double phi_x) {
  const double sigma = -phi_t * phi_t + phi_x * phi_x;
  const CoefficientBundle c = eval_coeffs(model, sigma);
  MetricComponents m{};
  // eta = diag(-1, 1); eta^{mu a} d_a phi = (-phi_t, phi_x)
  m.gi00 = -1.0 + 2.0 * c.fp * phi_t * phi_t;
  m.gi01 = -2.0 * c.fp * phi_t * phi_x;
  m.gi11 = 1.0 + 2.0 * c.fp * phi_x * phi_x;
  m.g00 = -1.0 + c.H * phi_t * phi_t;
  m.g01 = c.H * phi_t * phi_x;
  m.g11 = 1.0 + c.H * phi_x * phi_x;
  m.detgi = -c.kappa;
  m.detg = -1.0 / c.kappa;
  return m;
}

double contraction_identity_check(const Nonlinearity& model, double phi_t, double phi_x) {
  const MetricComponents m = acoustic_metric(model, phi_t, phi_x);
  const double sigma = -phi_t * phi_t + phi_x * phi_x;
  const double lhs = m.gi00 * phi_t * phi_t + 2.0 * m.gi01 * phi_t * phi_x + m.gi11 * phi_x * phi_x;
  const double rhs = sigma + 2.0 * model.df(sigma) * sigma * sigma;
  return std::abs(lhs - rhs);
}

double default_m0(const Nonlinearity& /*model*/) { return 0.5; }

RangeCertificate range_certificate(const Nonlinearity& model, double m0, double step) {
  if (!(m0 > 0.0) || !(step > 0.0)) raise(ErrorKind::DomainError, "range_certificate needs m0 > 0, step > 0");
  RangeCertificate rc;
  rc.m0 = m0;
  const double fd = 1e-5;
  auto G_at = [&](double s) { return eval_coeffs(model, s).G; };
  auto Hp_at = [&](double s) { return eval_coeffs(model, s).Hp; };
  auto visit = [&](double s) {
    const CoefficientBundle c = eval_coeffs(model, s);
    const double Gp = (G_at(s + fd) - G_at(s - fd)) / (2.0 * fd);
    const double Hpp = (Hp_at(s + fd) - Hp_at(s - fd)) / (2.0 * fd);
    rc.max_G = std::max(rc.max_G, std::abs(c.G));
    rc.max_H = std::max(rc.max_H, std::abs(c.H));
    rc.max_fp = std::max(rc.max_fp, std::abs(c.fp));
    rc.max_Gp = std::max(rc.max_Gp, std::abs(Gp));
    rc.max_Hp = std::max(rc.max_Hp, std::abs(c.Hp));
    rc.max_kappa = std::max(rc.max_kappa, std::abs(c.kappa));
    rc.max_inv_kappa = std::max(rc.max_inv_kappa, 1.0 / std::abs(c.kappa));
    rc.max_fpp = std::max(rc.max_fpp, std::abs(c.fpp));
    rc.max_Hpp = std::max(rc.max_Hpp, std::abs(Hpp));
  };
  const long n = static_cast<long>(std::floor(m0 / step + 1e-9));
  for (long k = -n; k <= n; ++k) visit(static_cast<double>(k) * step);
  visit(-m0);
  visit(m0);
  rc.M0 = std::max({rc.max_G, rc.max_H, rc.max_fp, rc.max_Gp, rc.max_Hp, rc.max_kappa,
                    rc.max_inv_kappa, rc.max_fpp, rc.max_Hpp});
  return rc;
}

}  // namespace nullwave
