// Simple traveling-wave backgrounds phi(t, x) = zeta(t - x): the profile,
// moderate-decrease envelopes, the phase function Z and the background null
// frame.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nullwave/nonlinearity.hpp"

namespace nullwave {

// eps / (1 + |x|)^(1 + gamma)
struct Envelope {
  double eps = 0.0;
  double gamma = 1.0;

  double eval(double x) const;
};

// Integral of the envelope over the real line (bounded by 2 eps (1 + 1/gamma)).
double envelope_integral(const Envelope& e);

enum class ProfileKind { Zero, Bump, Algebraic, Table, Custom };

struct ProfileTableRow {
  double x, zeta, dzeta, d2zeta;
};

// Profile zeta with two derivatives. M_zeta is measured at construction as the
// smallest constant with |zeta|, |zeta'|, |zeta''| <= M_zeta/(1+|x|)^(1+gamma_bar)
// on the verification sample [-100, 100] at spacing 0.01.
class WaveProfile {
 public:
  using Fn = std::function<double(double)>;

  static WaveProfile zero(double gamma_bar = 1.0);
  // amplitude * (1 - r^2)^6 with r = (x - center)/width, supported on |r| < 1.
  static WaveProfile bump(double amplitude, double center, double width, double gamma_bar = 1.0);
  // amplitude * (1 + x^2)^(-(1 + gamma)/2); gamma_bar = gamma.
  static WaveProfile algebraic(double amplitude, double gamma);
  // Piecewise cubic Hermite through tabulated (x, zeta, zeta', zeta''), zero outside.
  static WaveProfile table(std::vector<ProfileTableRow> rows, double gamma_bar = 1.0);
  static WaveProfile table_from_csv(const std::string& path, double gamma_bar = 1.0);
  static WaveProfile custom(Fn zeta, Fn dzeta, Fn d2zeta, double gamma_bar, std::string label);

  double zeta(double x) const { return zeta_(x); }
  double dzeta(double x) const { return dzeta_(x); }
  double d2zeta(double x) const { return d2zeta_(x); }

  double M_zeta() const noexcept { return M_zeta_; }
  double gamma_bar() const noexcept { return gamma_bar_; }
  ProfileKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }

  // Same shape multiplied by factor (M_zeta scales with it).
  WaveProfile scaled(double factor) const;

 private:
  WaveProfile(ProfileKind kind, Fn z, Fn dz, Fn d2z, double gamma_bar, std::string label);

  ProfileKind kind_;
  Fn zeta_, dzeta_, d2zeta_;
  double gamma_bar_;
  double M_zeta_ = 0.0;
  std::string label_;
};

// Smallest M with |g(x)| <= M/(1+|x|)^(1+gamma) over the sample.
double measure_envelope_constant(const std::function<double(double)>& g, double gamma,
                                 double x_max = 100.0, double spacing = 0.01);

struct HyperbolicityReport {
  bool pass = false;
  double margin = 0.0;  // 1 + inf_x H(0) zeta'(x)^2
};

HyperbolicityReport hyperbolicity_check(const WaveProfile& profile, const Nonlinearity& model,
                                        double x_max = 100.0, double spacing = 0.01);

// Z(ubar) = - int_0^ubar H(0) zeta'(s)^2 ds
double phase_function(const WaveProfile& profile, const Nonlinearity& model, double ubar);

struct BackgroundFrame {
  double L0, L1;
  double Lb0, Lb1;
  double Omega;
  double Z;
};

BackgroundFrame background_frame(const WaveProfile& profile, const Nonlinearity& model,
                                 double ubar);

}  // namespace nullwave
