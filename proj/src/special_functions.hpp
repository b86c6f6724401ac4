#pragma once

// Special-function kernels: Gamma, Kummer M(a;b;z), Tricomi U(a;b;z), and the
// Whittaker pair M_{a,b}(z), W_{a,b}(z) built on top of them via
//
//   M_{a,b}(z) = e^{-z/2} z^{b+1/2} M(b-a+1/2; 1+2b; z)
//   W_{a,b}(z) = e^{-z/2} z^{b+1/2} U(b-a+1/2; 1+2b; z)
//
// The operating range is a in {0,1}, b in [0, 1/2), z in (0, 40].  Every
// evaluation reports an error estimate and the route that produced it.
// Near a zero of the function the *relative* estimate is necessarily large;
// callers that sit near roots must work on absolute scales.

#include <string_view>

namespace sqsd::sf {

enum class Method {
  kSeries,      // Taylor series (single or two-term combination)
  kAsymptotic,  // large-z divergent expansion, optimally truncated
  kBessel,      // modified-Bessel identity (a = 0 second path)
  kLogCase,     // integer second parameter, logarithmic series
  kIntegral,    // real-integral representation, fixed Gauss-Legendre panels
};

std::string_view method_name(Method m);

struct EvalResult {
  double value = 0.0;
  double est_rel_error = 0.0;  // always finite; capped, never NaN/inf
  Method method = Method::kSeries;
};

struct WhittakerParams {
  double a;  // first index, 0 or 1 in this library's own use
  double b;  // second index, >= 0 on the public contract
  double z;  // argument, > 0
};

// Gamma function for real non-pole arguments.  Throws DomainError at
// nonpositive integers.
double gamma_fn(double x);

// Kummer confluent M(alpha; beta; z), z >= 0, beta not a nonpositive integer.
EvalResult kummer_m(double alpha, double beta, double z);

// Tricomi U(alpha; beta; z), z > 0.  Route selection: two-term Kummer
// combination for small z, real-integral representation mid-range,
// large-z asymptotic beyond, logarithmic series for integer beta.
EvalResult tricomi_u(double alpha, double beta, double z);

EvalResult whittaker_m(const WhittakerParams& p);
EvalResult whittaker_w(const WhittakerParams& p);

// Second evaluation path for the a = 0 functions, used for cross-checks:
//   M_{0,b}(z) = 4^b Gamma(1+b) sqrt(z) I_b(z/2)
//   W_{0,b}(z) = sqrt(z/pi) K_b(z/2)
EvalResult whittaker_m0_bessel(double b, double z);
EvalResult whittaker_w0_bessel(double b, double z);

namespace detail {

// psi(x) for real non-pole x, long-double accuracy.
long double digamma(long double x);

// 1/Gamma(x) with the value 0 at nonpositive-integer poles.
long double recip_gamma(long double x);

struct SeriesResult {
  long double value;
  long double abs_err;  // bound on accumulated rounding + truncation
};

// Defining power series of M(alpha; beta; z) summed in long double with
// compensated accumulation.
SeriesResult kummer_series(long double alpha, long double beta, long double z);

// e^{-z/2} z^{b+1/2} in long double; shared by the Whittaker wrappers and
// the identity checks.
long double whittaker_prefactor(long double b, long double z);

}  // namespace detail

}  // namespace sqsd::sf
