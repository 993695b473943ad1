#include <algorithm>
#include <cmath>

#include "nullwave/dn_core.hpp"
#include "nullwave/errors.hpp"
#include "nullwave/io.hpp"

namespace nullwave {

const std::array<const char*, 9>& EnvelopeFit::names() {
  static const std::array<const char*, 9> n = {"psi",    "psib",    "xi",
                                               "dpsi_u", "dpsib_u", "dxi_u",
                                               "dpsi_ub", "dpsib_ub", "dxi_ub"};
  return n;
}

double EnvelopeFit::max() const { return *std::max_element(delta.begin(), delta.end()); }

EnvelopeFit verify_envelopes(const DNState& state, double gamma_bar) {
  const DNGrid& g = state.grid;
  const int N = g.N();
  EnvelopeFit fit;
  constexpr Field order[9] = {Field::Psi,    Field::Psib,    Field::Xi,
                              Field::DpsiU,  Field::DpsibU,  Field::DxiU,
                              Field::DpsiUb, Field::DpsibUb, Field::DxiUb};
  for (int i = 0; i <= N; ++i) {
    const double wu = std::pow(1.0 + std::abs(g.u(i)), 1.0 + gamma_bar);
    for (int j = N - i; j <= N; ++j) {
      const double wub = std::pow(1.0 + std::abs(g.ub(j)), 1.0 + gamma_bar);
      const std::size_t k = g.index(i, j);
      for (int f = 0; f < 9; ++f) {
        const double w = f < 3 ? 1.0 : (f < 6 ? wu : wub);
        fit.delta[f] = std::max(fit.delta[f], w * std::abs(state[order[f]][k]));
      }
    }
  }
  return fit;
}

double sigma_wave_residual(const DNState& state, const WaveProfile& profile,
                           const Nonlinearity& model) {
  const DNGrid& g = state.grid;
  const int N = g.N();
  const double h = g.h;
  const auto& S = state[Field::Sigma];
  double res = 0.0;
  for (int i = 1; i < N; ++i) {
    for (int j = std::max(1, N - i + 2); j < N; ++j) {
      const double zp = profile.dzeta(g.ub(j)), zpp = profile.d2zeta(g.ub(j));
      const NodeWave w = state.node(i, j);
      const double mixed = (S[g.index(i + 1, j + 1)] - S[g.index(i + 1, j - 1)] -
                            S[g.index(i - 1, j + 1)] + S[g.index(i - 1, j - 1)]) /
                           (4.0 * h * h);
      const double sig = S[g.index(i, j)];
      const double G = eval_coeffs(model, sig).G;
      const double su = sigma_du(w, zp), sub = sigma_dub(w, zp, zpp);
      // Psi = psi, Psib = psib + 2 zeta'(ubar)
      const double dPsib_ub = w.dpsib_ub + 2.0 * zpp;
      const double r = mixed + G * su * sub + w.dpsi_u * dPsib_ub + w.dpsi_ub * w.dpsib_u;
      res = std::max(res, std::abs(r));
    }
  }
  return res;
}

std::string state_csv(const DNState& state) {
  const DNGrid& g = state.grid;
  const int N = g.N();
  std::string out = "u,ubar";
  for (int f = 0; f < kFieldCount; ++f) {
    out += ',';
    out += field_name(static_cast<Field>(f));
  }
  out += '\n';
  for (int i = 0; i <= N; ++i) {
    for (int j = N - i; j <= N; ++j) {
      const std::size_t k = g.index(i, j);
      out += format_double(g.u(i));
      out += ',';
      out += format_double(g.ub(j));
      for (int f = 0; f < kFieldCount; ++f) {
        out += ',';
        out += format_double(state.fields[f][k]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace nullwave
