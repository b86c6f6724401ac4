#pragma once

// Quad-precision (__float128) reference evaluations, independent of the fast
// kernels in sf::.  Series are summed with the defining term recurrences and
// stop when a term drops below 1e-30 of the partial sum; Gamma uses a Spouge
// approximation carried in quad precision.  These back the cross-checks and
// the frozen expected values in the test suites; nothing here calls sf::.

namespace sqsd::oracle::highprec {

// Gamma(x) for non-pole real x.
long double gamma_fn(long double x);

// Defining series of M(alpha; beta; z).
long double kummer_m(long double alpha, long double beta, long double z);

// M_{a,b}(z) = e^{-z/2} z^{b+1/2} M(b-a+1/2; 1+2b; z)
long double whittaker_m(long double a, long double b, long double z);

// W_{a,b}(z) through the two-term Kummer connection with quad-precision
// Gamma factors; requires 2b non-integer (use the Bessel or integral path
// at b = 0).
long double whittaker_w(long double a, long double b, long double z);

}  // namespace sqsd::oracle::highprec
