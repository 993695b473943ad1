// Uniform characteristic grid on the box [-R, R]^2 in (u, ubar). Node (i, j)
// sits at u = -R + i h, ubar = -R + j h; the data diagonal u = -ubar is i + j = N
// and the computed region is the future triangle i + j >= N.
#pragma once

#include <cstddef>

namespace nullwave {

struct DNGrid {
  double u_min = 0.0, u_max = 0.0;
  double ub_min = 0.0, ub_max = 0.0;
  double h = 0.0;
  int n_u = 0, n_ub = 0;

  // Throws DomainError unless 2R/h is (within 1e-9) a positive integer.
  static DNGrid symmetric(double R, double h);

  int N() const noexcept { return n_u - 1; }
  double u(int i) const noexcept { return u_min + i * h; }
  double ub(int j) const noexcept { return ub_min + j * h; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ub) +
           static_cast<std::size_t>(j);
  }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_u) * static_cast<std::size_t>(n_ub);
  }
  bool active(int i, int j) const noexcept { return i + j >= N(); }
  bool on_diagonal(int i, int j) const noexcept { return i + j == N(); }

  friend bool operator==(const DNGrid&, const DNGrid&) = default;
};

// Checks the alignment invariant (square, symmetric, diagonal through nodes).
// Throws GridMismatch with a description on failure.
void validate_grid(const DNGrid& g);

}  // namespace nullwave
