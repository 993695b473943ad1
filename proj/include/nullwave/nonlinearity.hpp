// Lagrangian nonlinearity f(sigma) and the coefficient functions derived
// from it: G, H, H', kappa = 1 + 2 f'(sigma) sigma, and the acoustic metric.
#pragma once

#include <array>
#include <string>

namespace nullwave {

enum class ModelKind { Linear, Membrane, Polynomial };

// Immutable value type. The polynomial kind carries user coefficients
// f(s) = a s + b s^2 + c s^3; the other kinds ignore them.
class Nonlinearity {
 public:
  static Nonlinearity linear();
  static Nonlinearity membrane();
  static Nonlinearity polynomial(double a, double b, double c);

  ModelKind kind() const noexcept { return kind_; }
  std::string name() const;
  const std::array<double, 3>& coefficients() const noexcept { return coeffs_; }

  // Whether f and its derivatives exist at s (membrane needs s > -1).
  bool defined_at(double s) const noexcept;

  double f(double s) const;
  double df(double s) const;
  double d2f(double s) const;
  double d3f(double s) const;

  friend bool operator==(const Nonlinearity&, const Nonlinearity&) = default;

 private:
  Nonlinearity(ModelKind kind, std::array<double, 3> coeffs) : kind_(kind), coeffs_(coeffs) {}

  ModelKind kind_;
  std::array<double, 3> coeffs_;
};

struct CoefficientBundle {
  double sigma;
  double f, fp, fpp;
  double G;
  double H;
  double Hp;
  double kappa;  // 1 + 2 f'(sigma) sigma
};

// Throws DomainError when f is undefined at sigma and HyperbolicityLoss when
// kappa <= 0.
CoefficientBundle eval_coeffs(const Nonlinearity& model, double sigma);

// Rectangular components of the acoustic metric g and its inverse, with the
// closed-form determinants det g^{-1} = -kappa and det g = -1/kappa.
struct MetricComponents {
  double g00, g01, g11;
  double gi00, gi01, gi11;
  double detg, detgi;
};

MetricComponents acoustic_metric(const Nonlinearity& model, double phi_t, double phi_x);

// |g^{mu nu} Phi_mu Phi_nu - (sigma + 2 f'(sigma) sigma^2)|
double contraction_identity_check(const Nonlinearity& model, double phi_t, double phi_x);

// Uniform bounds of the coefficient functions over |sigma| <= m0. G' and H''
// are taken by centered differences of G and H' so only three derivatives of
// f are ever required.
struct RangeCertificate {
  double m0 = 0.0;
  double M0 = 0.0;
  double max_G = 0.0, max_H = 0.0, max_fp = 0.0, max_Gp = 0.0, max_Hp = 0.0;
  double max_kappa = 0.0, max_inv_kappa = 0.0, max_fpp = 0.0, max_Hpp = 0.0;
};

RangeCertificate range_certificate(const Nonlinearity& model, double m0, double step = 1e-3);

double default_m0(const Nonlinearity& model);

}  // namespace nullwave
