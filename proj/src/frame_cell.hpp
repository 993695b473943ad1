// Frame transport cell shared by the front sweep and its serial reference.
#pragma once

#include <vector>

#include "nullwave/geometry.hpp"

namespace nullwave::detail {

struct FrameContext {
  const DNGrid& grid;
  const DNState& state;
  const Nonlinearity& model;
  FrameOptions opts;
  std::vector<double> zp, zpp;      // per j
  std::vector<double> Lbg0, Lbg1;   // background L at ubar_j
  std::vector<double> dLbg;         // d_ub of either background component
  // Right-hand sides per node: d_ub L and grid-u derivative of Lb.
  std::vector<double> rL0, rL1, rLb0, rLb1;
  NullFrame& frame;

  FrameContext(const DNGrid& g, const DNState& s, const WaveProfile& profile,
               const Nonlinearity& m, const FrameOptions& o, NullFrame& f);
};

void load_frame_diagonal(FrameContext& ctx, const GaugeSlice& slice);
void frame_cell(FrameContext& ctx, int i, int j);

}  // namespace nullwave::detail
