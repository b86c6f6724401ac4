#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature with an embedded error estimate,
// plus a reciprocal-substitution helper for algebraic tails on [x0, inf).
// Leaf utility: depends on nothing else in the library so the validation
// checks built on it stay independent of the evaluation paths they certify.

#include <functional>

namespace sqsd::quad {

struct Integral {
  double value;
  double abs_err;
};

// |result - true integral| <= tol for smooth integrands; throws
// ConvergenceError when the subdivision budget is exhausted.
Integral integrate_adaptive(const std::function<double(double)>& f, double lo,
                            double hi, double tol);

// Int_{x0}^inf f(x) dx for f ~ c x^{-1-decay} as x -> inf, via x = s^{-power}.
// power must satisfy power * decay > 1; generous powers are cheap.
Integral integrate_reciprocal_tail(const std::function<double(double)>& f,
                                   double x0, double tol, int power);

}  // namespace sqsd::quad
