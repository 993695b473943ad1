// Cell update shared by the wavefront march and its serial reference.
#pragma once

#include <array>
#include <vector>

#include "nullwave/dn_core.hpp"

namespace nullwave::detail {

struct MarchContext {
  const DNGrid& grid;
  const Nonlinearity& model;
  MarchOptions opts;
  std::vector<double> zp, zpp;            // zeta', zeta'' at ubar_j
  std::array<std::vector<double>, 3> r;   // mixed derivatives of psi, psib, xi
  DNState& state;

  MarchContext(const DNGrid& g, const Nonlinearity& m, const MarchOptions& o,
               const WaveProfile& profile, DNState& s);
};

// Writes the data on the diagonal and its mixed derivatives.
void load_diagonal(MarchContext& ctx, const DiagonalData& data);

// Fills node (i, j), i + j > N, from its west, south and (if active)
// south-west neighbours.
void march_cell(MarchContext& ctx, int i, int j);

// The cell quadrature with all four mixed derivatives known. Used for both the
// corner iteration and the Picard source integration.
struct CellTriple {
  double val, du, dub;
};

inline CellTriple cell_update(const CellTriple& W, const CellTriple& S, const CellTriple* SW,
                              double rN, double rW, double rS, double rSW, double h) {
  const double hh = 0.5 * h;
  CellTriple N;
  N.dub = W.dub + hh * (rW + rN);
  N.du = S.du + hh * (rS + rN);
  if (SW) {
    N.val = W.val + S.val - SW->val + 0.25 * h * h * (rN + rW + rS + rSW);
  } else {
    // Next to the diagonal: average the trapezoid steps from W (in u) and S (in ubar).
    N.val = 0.5 * (W.val + hh * (W.du + N.du) + S.val + hh * (S.dub + N.dub));
  }
  return N;
}

}  // namespace nullwave::detail
