#include "nullwave/grid.hpp"

#include <cmath>
#include <string>

#include "nullwave/errors.hpp"

namespace nullwave {

DNGrid DNGrid::symmetric(double R, double h) {
  if (!(R > 0.0) || !(h > 0.0)) raise(ErrorKind::DomainError, "grid needs R > 0 and h > 0");
  const double cells = 2.0 * R / h;
  const double n = std::round(cells);
  if (n < 2.0 || std::abs(cells - n) > 1e-9 * std::max(1.0, cells)) {
    raise(ErrorKind::DomainError,
          "box [-R, R] is not an integer number (>= 2) of cells of width h: 2R/h = " +
              std::to_string(cells));
  }
  DNGrid g;
  g.u_min = g.ub_min = -R;
  g.u_max = g.ub_max = R;
  g.h = h;
  g.n_u = g.n_ub = static_cast<int>(n) + 1;
  return g;
}

void validate_grid(const DNGrid& g) {
  if (!(g.h > 0.0)) raise(ErrorKind::GridMismatch, "grid spacing must be positive");
  if (g.n_u != g.n_ub || g.n_u < 3) raise(ErrorKind::GridMismatch, "grid must be square");
  if (g.u_min != g.ub_min || g.u_max != g.ub_max || g.u_min != -g.u_max) {
    raise(ErrorKind::GridMismatch, "grid must be the symmetric box [-R, R]^2");
  }
  const double span = g.u_min + (g.n_u - 1) * g.h;
  if (std::abs(span - g.u_max) > 1e-9 * std::max(1.0, std::abs(g.u_max))) {
    raise(ErrorKind::GridMismatch, "node count does not match box and spacing");
  }
}

}  // namespace nullwave
