// Time stepper behind rect_solve; the serial reference instantiates it with
// threading switched off.
#pragma once

#include "nullwave/crossval.hpp"

namespace nullwave::detail {

RectState rect_solve_impl(const RectInitialData& data, const Nonlinearity& model,
                          const RectGrid& grid, const WaveProfile& profile, bool parallel);

}  // namespace nullwave::detail
