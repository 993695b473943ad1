#include "../rect_kernel.hpp"

namespace nullwave::reference {

RectState rect_solve_serial(const RectInitialData& data, const Nonlinearity& model,
                            const RectGrid& grid, const WaveProfile& profile) {
  return detail::rect_solve_impl(data, model, grid, profile, false);
}

}  // namespace nullwave::reference
