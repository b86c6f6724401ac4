#include "spectrum.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "rootfind.hpp"
#include "special_functions.hpp"

namespace sqsd::spectrum {

namespace {

constexpr double kCutoff = 0.125;  // spectrum cutoff 1/8

double critical_threshold_impl() {
  // Root of M(-1/2; 1; 2/A) in A: same zeros as M_{1,0}(2/A).
  auto f = [](double A) {
    return static_cast<double>(
        sf::detail::kummer_series(-0.5L, 1.0L, 2.0L / A).value);
  };
  double lo = 1.0, hi = 1.6;
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi >= 0.0) {
    throw InternalError("critical_threshold: M_{1,0}(2/A) not bracketed on [1.0, 1.6]");
  }
  return sqsd::detail::brent_root(f, lo, hi, flo, fhi, 1e-12);
}

}  // namespace

std::string_view regime_name(Regime r) {
  return r == Regime::kSubcritical ? "subcritical" : "critical-or-supercritical";
}

double xi_of_lambda(double lambda) {
  if (!(lambda > 0.0) || !(lambda <= kCutoff)) {
    throw DomainError("xi_of_lambda: lambda must lie in (0, 1/8]");
  }
  return std::sqrt(1.0 - 8.0 * lambda);
}

double lambda_of_xi(double xi) {
  if (!(xi >= 0.0) || !(xi < 1.0)) {
    throw DomainError("lambda_of_xi: xi must lie in [0, 1)");
  }
  return 0.125 * (1.0 - xi * xi);
}

double critical_threshold() {
  static const double a_star = critical_threshold_impl();
  return a_star;
}

namespace detail {

double eigen_equation_kummer(double xi, double A) {
  return static_cast<double>(
      sf::detail::kummer_series(0.5L * xi - 0.5L, 1.0L + xi, 2.0L / A).value);
}

double eigen_equation_whittaker(double xi, double A) {
  return sf::whittaker_m({1.0, 0.5 * xi, 2.0 / A}).value;
}

}  // namespace detail

SpectralPoint principal_eigenvalue(double A) {
  if (!(A > 0.0)) throw DomainError("principal_eigenvalue: A must be > 0");
  const double a_star = critical_threshold();
  if (A >= a_star * (1.0 - 1e-12)) {
    return {A, kCutoff, 0.0, Regime::kCriticalOrSupercritical};
  }

  // lambda_A decays like exp(-c/A) as A -> 0, so the root in xi crowds the
  // right end of (0,1); the upper bracket must sit within ulps of 1, and for
  // very small A the gap 1 - xi is only resolvable in log coordinates.
  auto g = [A](double xi) { return detail::eigen_equation_kummer(xi, A); };
  auto gu = [&g](double u) { return g(1.0 - std::exp(u)); };
  auto solve_log_gap = [&](double u_lo, double u_hi) -> SpectralPoint {
    double l = gu(u_lo), h = gu(u_hi);
    double u = sqsd::detail::brent_root(gu, u_lo, u_hi, l, h, 1e-12);
    double eta = std::exp(u);  // 1 - xi, kept in log scale for accuracy
    double lambda = eta * (2.0 - eta) / 8.0;
    return {A, lambda, 1.0 - eta, Regime::kSubcritical};
  };

  double lo = 1e-9, hi = 1.0 - 1e-15;
  double glo = g(lo), ghi = g(hi);
  if (glo * ghi < 0.0) {
    double xi = sqsd::detail::brent_root(g, lo, hi, glo, ghi, 1e-13);
    if (xi > 1.0 - 1e-4) {
      // gap 1 - xi poorly resolved in xi coordinates; redo in log space
      return solve_log_gap(-700.0, std::log(1e-3));
    }
    return {A, lambda_of_xi(xi), xi, Regime::kSubcritical};
  }

  // Scan xi directly first (isolated roots away from the ends), then
  // u = ln(1 - xi) for roots crowding xi = 1.
  double prev = lo, gprev = glo;
  for (int i = 1; i <= 200; ++i) {
    double x = lo + (hi - lo) * i / 200.0;
    double gx = g(x);
    if (gprev * gx <= 0.0) {
      double xi = sqsd::detail::brent_root(g, prev, x, gprev, gx, 1e-13);
      return {A, lambda_of_xi(xi), xi, Regime::kSubcritical};
    }
    prev = x;
    gprev = gx;
  }
  double ulo = -700.0, uhi = std::log(1e-15);
  if (gu(ulo) * gu(uhi) <= 0.0) {
    return solve_log_gap(ulo, uhi);
  }
  throw ConvergenceError(
      "principal_eigenvalue: eigenvalue equation has no resolvable sign change for A=" +
      std::to_string(A));
}

std::vector<SpectralPoint> eigenvalue_curve(std::span<const double> A_grid) {
  if (A_grid.empty()) throw DomainError("eigenvalue_curve: empty grid");
  std::vector<SpectralPoint> out;
  out.reserve(A_grid.size());
  double prev = 0.0;
  for (double A : A_grid) {
    if (!(A > prev)) {
      throw DomainError("eigenvalue_curve: grid must be strictly ascending and positive");
    }
    prev = A;
    out.push_back(principal_eigenvalue(A));
  }
  return out;
}

}  // namespace sqsd::spectrum
