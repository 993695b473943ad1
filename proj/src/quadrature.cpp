#include "nullwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "nullwave/errors.hpp"

namespace nullwave {
namespace {

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, const SimpsonPanel& p, double tol,
               int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    std::ostringstream os;
    os << "adaptive Simpson did not converge on [" << p.a << ", " << p.b << "]";
    raise(ErrorKind::QuadratureFailure, os.str());
  }
  SimpsonPanel lp{p.a, lm, p.m, p.fa, flm, p.fm, left};
  SimpsonPanel rp{p.m, rm, p.b, p.fm, frm, p.fb, right};
  return recurse(f, lp, 0.5 * tol, depth - 1) + recurse(f, rp, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, abs_tol, max_depth);
  // Start from a few panels so narrow features are not stepped over.
  constexpr int kPanels = 16;
  const double w = (b - a) / kPanels;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double pa = a + k * w;
    const double pb = (k + 1 == kPanels) ? b : a + (k + 1) * w;
    const double pm = 0.5 * (pa + pb);
    SimpsonPanel p{pa, pm, pb, f(pa), f(pm), f(pb), 0.0};
    p.whole = simpson(pa, pb, p.fa, p.fm, p.fb);
    total += recurse(f, p, abs_tol / kPanels, max_depth);
  }
  return total;
}

double integrate_half_line(const std::function<double(double)>& f, double a, double abs_tol) {
  boost::math::quadrature::exp_sinh<double> rule;
  double err = 0.0;
  double l1 = 0.0;
  // Ask the rule for more than abs_tol so its (pessimistic) estimate clears the check.
  const double value = rule.integrate([&](double s) { return f(a + s); },
                                      std::max(1e-3 * abs_tol, 1e-15), &err, &l1);
  if (!std::isfinite(value) || err > abs_tol * std::max(1.0, l1)) {
    std::ostringstream os;
    os << "half-line quadrature error estimate " << err << " exceeds tolerance";
    raise(ErrorKind::QuadratureFailure, os.str());
  }
  return value;
}

}  // namespace nullwave
