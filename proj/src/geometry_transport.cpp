#include <cmath>
#include <sstream>

#include "nullwave/errors.hpp"
#include "nullwave/geometry.hpp"

namespace nullwave {

TransportNode transport_node(const NodeWave& w, double dzeta, double d2zeta, double u_scale) {
  TransportNode n;
  const double Psi = w.psi, Psib = w.psib + 2.0 * dzeta;
  n.sigma = -Psi * Psib;
  n.Phi0 = 0.5 * (Psi + Psib);
  n.Phi1 = 0.5 * (Psi - Psib);
  const double inv = 1.0 / u_scale;
  n.dphi_u = w.dxi_u * inv;
  n.dphi_ub = dzeta + w.dxi_ub;
  n.dsigma_u = sigma_du(w, dzeta) * inv;
  n.dsigma_ub = sigma_dub(w, dzeta, d2zeta);
  const double dPsib_ub = w.dpsib_ub + 2.0 * d2zeta;
  n.dPhi0_u = 0.5 * (w.dpsi_u + w.dpsib_u) * inv;
  n.dPhi1_u = 0.5 * (w.dpsi_u - w.dpsib_u) * inv;
  n.dPhi0_ub = 0.5 * (w.dpsi_ub + dPsib_ub);
  n.dPhi1_ub = 0.5 * (w.dpsi_ub - dPsib_ub);
  return n;
}

double metric_pair(const Nonlinearity& model, double Phi0, double Phi1, double X0, double X1,
                   double Y0, double Y1) {
  const double H = eval_coeffs(model, -Phi0 * Phi0 + Phi1 * Phi1).H;
  const double g00 = -1.0 + H * Phi0 * Phi0;
  const double g01 = H * Phi0 * Phi1;
  const double g11 = 1.0 + H * Phi1 * Phi1;
  return g00 * X0 * Y0 + g01 * (X0 * Y1 + X1 * Y0) + g11 * X1 * Y1;
}

TransportRhs transport_rhs(const TransportNode& n, const Nonlinearity& model) {
  const CoefficientBundle c = eval_coeffs(model, n.sigma);
  const double H = c.H, Hp = c.Hp;
  const double g00 = -1.0 + H * n.Phi0 * n.Phi0;
  const double g01 = H * n.Phi0 * n.Phi1;
  const double g11 = 1.0 + H * n.Phi1 * n.Phi1;
  TransportRhs r;
  r.Omega_inv = g00 * n.L0 * n.Lb0 + g01 * (n.L0 * n.Lb1 + n.L1 * n.Lb0) + g11 * n.L1 * n.Lb1;
  if (!(std::abs(r.Omega_inv) >= 1e-10)) {
    std::ostringstream os;
    os << "|g(L, Lb)| = " << std::abs(r.Omega_inv) << " < 1e-10";
    raise(ErrorKind::FrameDegenerate, os.str());
  }
  const double L[2] = {n.L0, n.L1}, Lb[2] = {n.Lb0, n.Lb1};
  const double LdPhi_ub = n.L0 * n.dPhi0_ub + n.L1 * n.dPhi1_ub;
  const double LbdPhi_u = n.Lb0 * n.dPhi0_u + n.Lb1 * n.dPhi1_u;
  const double Oi = r.Omega_inv;
  for (int mu = 0; mu < 2; ++mu) {
    r.dL_dub[mu] = -L[mu] * n.dphi_u * H * LdPhi_ub - Lb[mu] * n.dphi_ub * H * LdPhi_ub -
                   Oi * Hp * n.dphi_ub *
                       (L[mu] * n.dphi_u * n.dsigma_ub + 0.5 * Lb[mu] * n.dsigma_ub * n.dphi_ub -
                        0.5 * L[mu] * n.dsigma_u * n.dphi_ub);
    r.dLb_du[mu] = -Lb[mu] * n.dphi_ub * H * LbdPhi_u - L[mu] * n.dphi_u * H * LbdPhi_u -
                   Oi * Hp * n.dphi_u *
                       (Lb[mu] * n.dphi_ub * n.dsigma_u + 0.5 * L[mu] * n.dsigma_u * n.dphi_u -
                        0.5 * Lb[mu] * n.dsigma_ub * n.dphi_u);
  }
  return r;
}

}  // namespace nullwave
