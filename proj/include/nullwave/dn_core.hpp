// Double-null solver for the perturbed system in the wave variables
//   psi = Psi,  psib = Psib - 2 zeta'(ubar),  xi = phi - zeta(ubar),
// with sigma = -psi (2 zeta'(ubar) + psib) kept algebraic. Production path is
// the characteristic march; the Picard operator is the verification path.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "nullwave/background.hpp"
#include "nullwave/grid.hpp"
#include "nullwave/nonlinearity.hpp"

namespace nullwave {

enum class Field : int {
  Psi = 0,
  Psib,
  Sigma,
  Xi,
  DpsiU,
  DpsiUb,
  DpsibU,
  DpsibUb,
  DxiU,
  DxiUb,
};
inline constexpr int kFieldCount = 10;
const char* field_name(Field f);

// Wave variables and their null derivatives at one node.
struct NodeWave {
  double psi = 0.0, psib = 0.0, xi = 0.0;
  double dpsi_u = 0.0, dpsi_ub = 0.0;
  double dpsib_u = 0.0, dpsib_ub = 0.0;
  double dxi_u = 0.0, dxi_ub = 0.0;
};

// Nodes outside the future triangle hold zeros and are never read.
struct DNState {
  DNGrid grid;
  std::array<std::vector<double>, kFieldCount> fields;

  DNState() = default;
  explicit DNState(const DNGrid& g);

  std::vector<double>& operator[](Field f) { return fields[static_cast<int>(f)]; }
  const std::vector<double>& operator[](Field f) const { return fields[static_cast<int>(f)]; }
  double at(Field f, int i, int j) const { return (*this)[f][grid.index(i, j)]; }
  NodeWave node(int i, int j) const;
  void set_node(int i, int j, const NodeWave& w, double sigma);
};

// Data on the diagonal, indexed by k = i (node (k, N - k), s = u_k).
struct DiagonalData {
  std::vector<double> s;
  std::vector<NodeWave> nodes;
  std::vector<double> sigma;
};

double diagonal_sigma(const NodeWave& w, double dzeta_ub);

// Smallest eps0 with every diagonal entry bounded by eps0/(1+|s|)^(1+gamma).
double diagonal_eps0(const DiagonalData& data, double gamma_bar);

// Diagonal data from a state already filled on the diagonal.
DiagonalData diagonal_of(const DNState& state, const WaveProfile& profile);

struct WaveRhs {
  double r_psi = 0.0, r_psib = 0.0, r_xi = 0.0;
  double sigma = 0.0;
};

// Mixed derivatives d_u d_ub of (psi, psib, xi) from the evolution equations.
WaveRhs rhs_wave(const NodeWave& w, double dzeta, double d2zeta, const Nonlinearity& model);

// d_u sigma and d_ub sigma by the product rule.
double sigma_du(const NodeWave& w, double dzeta);
double sigma_dub(const NodeWave& w, double dzeta, double d2zeta);

struct MarchOptions {
  int max_inner = 8;
  double inner_tol = 1e-12;
};

DNState march(const DNGrid& grid, const DiagonalData& data, const WaveProfile& profile,
              const Nonlinearity& model, const MarchOptions& opts = {});

namespace reference {
// Row-major single-threaded traversal of the same cell update.
DNState march_serial(const DNGrid& grid, const DiagonalData& data, const WaveProfile& profile,
                     const Nonlinearity& model, const MarchOptions& opts = {});
}  // namespace reference

// ---- Picard operator -------------------------------------------------------

enum class PicardOrder { PsiFirst, PsibFirst };

struct PicardConfig {
  double delta = 0.1;
  int max_iter = 60;
  double tol = 1e-10;
  PicardOrder order = PicardOrder::PsiFirst;
};

void validate(const PicardConfig& cfg);

// T(input): psi and psib fields (and sigma) of the output; xi fields are zero.
DNState picard_apply(const DNState& input, const DNGrid& grid, const DiagonalData& data,
                     const WaveProfile& profile, const Nonlinearity& model,
                     PicardOrder order = PicardOrder::PsiFirst);

// Max of the six weighted sup-norms over the psi/psib fields.
double picard_metric(const DNState& a, const DNState& b, double gamma_bar);

// Membership in the ball X_delta (|psi| <= delta^2, |psib| <= delta, envelopes
// on the derivatives).
bool in_ball(const DNState& s, double delta, double gamma_bar);

struct PicardSolveResult {
  DNState state;
  int iterations = 0;
  std::vector<double> increments;
  bool converged = false;
};

PicardSolveResult picard_solve(const DNGrid& grid, const DiagonalData& data,
                               const WaveProfile& profile, const Nonlinearity& model,
                               const PicardConfig& cfg);

// Smooth seed in X_delta. The phases pick the family member; alpha, beta in
// (0, 1] scale psi and psib inside the ball.
DNState picard_seed(const DNGrid& grid, double delta, double gamma_bar, double alpha,
                    double beta, double phase_psi, double phase_psib, double omega = 1.0);

struct ContractionReport {
  std::vector<double> ratios;
  double max_ratio = 0.0;
  bool in_ball = true;
  double delta = 0.0;
  double eps0 = 0.0;
  bool smallness_relation = false;  // 6 (1 + 1/gamma) eps0 <= delta^2
  bool delta_bound = false;         // delta <= 1/(48 M0 Mzeta (1 + 1/gamma)^2)
};

// Applies T to a fixed family of seed pairs (at least five, including pairs
// that differ in psi only) and reports d(Ta, Tb)/d(a, b).
ContractionReport contraction_ratio(const DNGrid& grid, const DiagonalData& data,
                                    const WaveProfile& profile, const Nonlinearity& model,
                                    const PicardConfig& cfg);

// ---- diagnostics -----------------------------------------------------------

struct EnvelopeFit {
  std::array<double, 9> delta{};  // psi, psib, xi, dpsi_u, dpsib_u, dxi_u, dpsi_ub, dpsib_ub, dxi_ub
  static const std::array<const char*, 9>& names();
  double max() const;
};

EnvelopeFit verify_envelopes(const DNState& state, double gamma_bar);

// Sup-norm of the sigma wave equation in null form,
//   d_u d_ub sigma + G d_u sigma d_ub sigma + d_u Psi d_ub Psib + d_ub Psi d_u Psib,
// with the mixed derivative by centered differences on interior nodes.
double sigma_wave_residual(const DNState& state, const WaveProfile& profile,
                           const Nonlinearity& model);

// Row-major CSV over the computed triangle.
std::string state_csv(const DNState& state);

}  // namespace nullwave
