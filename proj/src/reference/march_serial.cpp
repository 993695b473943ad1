#include "../dn_cell.hpp"
#include "nullwave/dn_core.hpp"

namespace nullwave::reference {

DNState march_serial(const DNGrid& grid, const DiagonalData& data, const WaveProfile& profile,
                     const Nonlinearity& model, const MarchOptions& opts) {
  validate_grid(grid);
  DNState state(grid);
  detail::MarchContext ctx(grid, model, opts, profile, state);
  detail::load_diagonal(ctx, data);
  const int N = grid.N();
  for (int i = 1; i <= N; ++i) {
    for (int j = N - i + 1; j <= N; ++j) detail::march_cell(ctx, i, j);
  }
  return state;
}

}  // namespace nullwave::reference
