#pragma once

#include <cmath>
#include <utility>

#include "errors.hpp"

namespace sqsd::detail {

// Brent's method.  Requires f(a) f(b) <= 0.  Stops when the bracket shrinks
// below xtol or |f| drops below ftol (ftol = 0 disables the residual exit).
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb,
                  double xtol, double ftol = 0.0, int max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw ConvergenceError("brent_root: root not bracketed");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = 2.0 * 1.1e-16 * std::fabs(b) + 0.5 * xtol;
    double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (ftol > 0.0 && std::fabs(fb) <= ftol) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double q2 = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * q2 * (q2 - r) - (b - a) * (r - 1.0));
        q = (q2 - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::fmin(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  throw ConvergenceError("brent_root: iteration limit reached");
}

}  // namespace sqsd::detail
