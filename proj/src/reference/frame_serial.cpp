#include "../frame_cell.hpp"
#include "nullwave/errors.hpp"

namespace nullwave::reference {

NullFrame integrate_frame_serial(const DNState& state, const GaugeSlice& slice,
                                 const DNGrid& grid, const WaveProfile& profile,
                                 const Nonlinearity& model, const FrameOptions& opts) {
  validate_grid(grid);
  if (!(state.grid == grid)) raise(ErrorKind::GridMismatch, "state and frame grids differ");
  NullFrame frame(grid);
  detail::FrameContext ctx(grid, state, profile, model, opts, frame);
  detail::load_frame_diagonal(ctx, slice);
  const int N = grid.N();
  for (int i = 1; i <= N; ++i) {
    for (int j = N - i + 1; j <= N; ++j) detail::frame_cell(ctx, i, j);
  }
  return frame;
}

}  // namespace nullwave::reference
