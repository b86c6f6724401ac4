#include "highprec.hpp"

#include <quadmath.h>

#include <array>
#include <cmath>

#include "errors.hpp"

namespace sqsd::oracle::highprec {

namespace {

using quad = __float128;

const quad kQPi = acosq(quad(-1));

// Spouge coefficients for a = 40: |eps| ~ 1e-33 relative.
constexpr int kSpougeA = 40;

const std::array<quad, kSpougeA>& spouge_coeffs() {
  static const std::array<quad, kSpougeA> c = [] {
    std::array<quad, kSpougeA> out{};
    out[0] = sqrtq(quad(2.0) * kQPi);
    quad sign = quad(1.0);
    quad fact = quad(1.0);  // (k-1)!
    for (int k = 1; k < kSpougeA; ++k) {
      quad ak = static_cast<quad>(kSpougeA - k);
      out[k] = sign * powq(ak, k - quad(0.5)) * expq(ak) / fact;
      sign = -sign;
      fact *= k;
    }
    return out;
  }();
  return c;
}

quad gamma_q(quad x) {
  if (x < quad(0.5)) {
    // reflection; sin(pi x) with lattice reduction
    quad n = floorq(x);
    quad r = x - n;
    quad s = sinq(kQPi * r);
    if (static_cast<long long>(n) % 2 != 0) s = -s;
    return kQPi / (s * gamma_q(quad(1.0) - x));
  }
  const auto& c = spouge_coeffs();
  quad z = x - quad(1.0);
  quad acc = c[0];
  for (int k = 1; k < kSpougeA; ++k) acc += c[k] / (z + k);
  quad t = z + kSpougeA;
  return powq(t, z + quad(0.5)) * expq(-t) * acc;
}

quad kummer_q(quad alpha, quad beta, quad z) {
  quad term = quad(1.0), sum = quad(1.0);
  int calm = 0;
  for (int n = 0; n < 8000; ++n) {
    term *= (alpha + n) * z / ((beta + n) * (n + 1));
    sum += term;
    if (term == quad(0.0)) return sum;
    if (fabsq(term) <= quad(1e-30) * fabsq(sum)) {
      if (++calm >= 3 && n >= z) return sum;
    } else {
      calm = 0;
    }
  }
  throw ConvergenceError("highprec::kummer_m did not converge");
}

quad prefactor_q(quad b, quad z) { return expq(-quad(0.5) * z) * powq(z, b + quad(0.5)); }

bool is_nonpos_int_q(quad x) { return x <= quad(0.0) && x == floorq(x); }

}  // namespace

long double gamma_fn(long double x) {
  if (is_nonpos_int_q(x)) throw DomainError("highprec::gamma_fn: pole");
  return static_cast<long double>(gamma_q(static_cast<quad>(x)));
}

long double kummer_m(long double alpha, long double beta, long double z) {
  if (is_nonpos_int_q(beta)) throw DomainError("highprec::kummer_m: beta pole");
  return static_cast<long double>(
      kummer_q(static_cast<quad>(alpha), static_cast<quad>(beta), static_cast<quad>(z)));
}

long double whittaker_m(long double a, long double b, long double z) {
  quad aq = a, bq = b, zq = z;
  return static_cast<long double>(prefactor_q(bq, zq) *
                                  kummer_q(bq - aq + quad(0.5), quad(1.0) + quad(2.0) * bq, zq));
}

long double whittaker_w(long double a, long double b, long double z) {
  quad aq = a, bq = b, zq = z;
  quad alpha = bq - aq + quad(0.5);
  quad beta = quad(1.0) + quad(2.0) * bq;
  if (is_nonpos_int_q(quad(1.0) - beta) || is_nonpos_int_q(beta - quad(1.0))) {
    throw DomainError("highprec::whittaker_w: 2b must be non-integer");
  }
  quad t1 = quad(0.0);
  if (!is_nonpos_int_q(alpha - beta + quad(1.0))) {
    t1 = gamma_q(quad(1.0) - beta) / gamma_q(alpha - beta + quad(1.0)) * kummer_q(alpha, beta, zq);
  }
  quad t2 = quad(0.0);
  if (!is_nonpos_int_q(alpha)) {
    t2 = gamma_q(beta - quad(1.0)) / gamma_q(alpha) * powq(zq, quad(1.0) - beta) *
         kummer_q(alpha - beta + quad(1.0), quad(2.0) - beta, zq);
  }
  return static_cast<long double>(prefactor_q(bq, zq) * (t1 + t2));
}

}  // namespace sqsd::oracle::highprec
