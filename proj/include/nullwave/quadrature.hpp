// One-dimensional quadrature used by the background and gauge modules.
#pragma once

#include <functional>

namespace nullwave {

// Adaptive Simpson on [a, b] (a > b allowed, sign follows). Throws
// QuadratureFailure if the recursion depth is exhausted before the local
// error estimate drops under the absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10, int max_depth = 50);

// Integral over [a, +inf) of a decaying integrand (double-exponential rule).
double integrate_half_line(const std::function<double(double)>& f, double a,
                           double abs_tol = 1e-10);

}  // namespace nullwave
