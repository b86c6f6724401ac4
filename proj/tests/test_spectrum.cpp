#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "errors.hpp"
#include "highprec.hpp"
#include "spectrum.hpp"

using namespace sqsd;
namespace hp = sqsd::oracle::highprec;

TEST_CASE("xi <-> lambda reparameterization") {
  CHECK(spectrum::xi_of_lambda(0.125) == 0.0);
  CHECK(spectrum::xi_of_lambda(0.09375) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(spectrum::lambda_of_xi(0.0) == 0.125);  // spectrum cutoff
  for (int i = 0; i < 32; ++i) {
    double xi = i / 32.0;
    CHECK(std::fabs(spectrum::xi_of_lambda(spectrum::lambda_of_xi(xi)) - xi) <= 1e-15);
  }
  CHECK_THROWS_AS(spectrum::xi_of_lambda(0.0), DomainError);
  CHECK_THROWS_AS(spectrum::xi_of_lambda(0.2), DomainError);
  CHECK_THROWS_AS(spectrum::lambda_of_xi(1.0), DomainError);
  CHECK_THROWS_AS(spectrum::lambda_of_xi(-0.1), DomainError);
}

TEST_CASE("critical threshold") {
  double a_star = spectrum::critical_threshold();
  CHECK(std::fabs(a_star - 1.265857361) <= 1e-8);
  CHECK(a_star == doctest::Approx(1.2658573613937896).epsilon(1e-11));  // regression
  CHECK(spectrum::critical_threshold() == a_star);  // cached

  // the defining function changes sign across the bracket
  double f_lo = spectrum::detail::eigen_equation_whittaker(0.0, 1.0);
  double f_hi = spectrum::detail::eigen_equation_whittaker(0.0, 1.6);
  CHECK(f_lo * f_hi < 0.0);
  // and the root residual is at rounding level
  CHECK(std::fabs(spectrum::detail::eigen_equation_whittaker(0.0, a_star)) < 1e-9);
}

TEST_CASE("principal eigenvalue: supercritical plateau is exact") {
  for (double A : {1.266, 2.0, 5.0, 10.0, 20.09}) {
    auto sp = spectrum::principal_eigenvalue(A);
    CHECK(sp.lambda == 0.125);
    CHECK(sp.xi == 0.0);
    CHECK(sp.regime == spectrum::Regime::kCriticalOrSupercritical);
  }
  // boundary case A = A* itself
  CHECK(spectrum::principal_eigenvalue(spectrum::critical_threshold()).lambda == 0.125);
}

TEST_CASE("principal eigenvalue at A = 1 against 60-step bisection on the "
          "high-precision series") {
  double lo = 1e-9, hi = 1.0 - 1e-9;
  auto g = [](double xi) {
    return static_cast<double>(hp::kummer_m(0.5L * xi - 0.5L, 1.0L + xi, 2.0L));
  };
  double glo = g(lo);
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if ((glo < 0.0) == (gm < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  double xi_oracle = 0.5 * (lo + hi);
  double lambda_oracle = 0.125 * (1.0 - xi_oracle * xi_oracle);
  CHECK(lambda_oracle == doctest::Approx(0.12157423733014346).epsilon(1e-13));

  auto sp = spectrum::principal_eigenvalue(1.0);
  CHECK(sp.regime == spectrum::Regime::kSubcritical);
  CHECK(sp.xi == doctest::Approx(xi_oracle).epsilon(1e-11));
  CHECK(sp.lambda == doctest::Approx(lambda_oracle).epsilon(1e-11));
  CHECK(std::fabs(sp.lambda - 0.125 * (1.0 - sp.xi * sp.xi)) <= 1e-17);
}

TEST_CASE("principal eigenvalue: residuals vanish at the solutions") {
  for (double A : {0.1, 0.3, 0.6, 0.9, 1.2}) {
    auto sp = spectrum::principal_eigenvalue(A);
    CHECK(std::fabs(spectrum::detail::eigen_equation_whittaker(sp.xi, A)) < 1e-9);
    CHECK(sp.lambda > 0.0);
    CHECK(sp.lambda < 0.125);
  }
}

TEST_CASE("principal eigenvalue: domain error") {
  CHECK_THROWS_AS(spectrum::principal_eigenvalue(0.0), DomainError);
  CHECK_THROWS_AS(spectrum::principal_eigenvalue(-1.0), DomainError);
}

TEST_CASE("eigenvalue equation changes sign exactly once on (0,1)") {
  for (double A : {0.3, 0.9}) {
    int changes = 0;
    double prev = spectrum::detail::eigen_equation_kummer(1e-6, A);
    for (int i = 1; i <= 200; ++i) {
      double xi = 1e-6 + (1.0 - 2e-6) * i / 200.0;
      double v = spectrum::detail::eigen_equation_kummer(xi, A);
      if (prev * v < 0.0) ++changes;
      prev = v;
    }
    CHECK(changes == 1);
  }
}

TEST_CASE("eigenvalue curve: monotone, bounded, plateau") {
  std::vector<double> grid{0.2, 0.6, 1.0, 1.2, 20.09};
  auto pts = spectrum::eigenvalue_curve(grid);
  REQUIRE(pts.size() == grid.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].lambda > 0.0);
    CHECK(pts[i].lambda <= 0.125);
    if (i > 0 && pts[i].regime == spectrum::Regime::kSubcritical) {
      CHECK(pts[i].lambda > pts[i - 1].lambda);
    }
  }
  CHECK(pts.back().lambda == 0.125);  // A = 20.09 >= e^3 bound, and >= A*

  CHECK_THROWS_AS(spectrum::eigenvalue_curve(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(spectrum::eigenvalue_curve(std::vector<double>{0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(spectrum::eigenvalue_curve(std::vector<double>{-1.0, 0.5}), DomainError);
}

TEST_CASE("continuity at the critical threshold") {
  double a_star = spectrum::critical_threshold();
  auto sp = spectrum::principal_eigenvalue(a_star - 1e-6);
  CHECK(sp.lambda >= 0.125 - 1e-4);
  CHECK(sp.lambda < 0.125);
}

TEST_CASE("small-A eigenvalues resolve in log coordinates") {
  // lambda_A ~ exp(-c/A): tiny but strictly positive and still monotone
  auto p1 = spectrum::principal_eigenvalue(0.05);
  auto p2 = spectrum::principal_eigenvalue(0.08);
  CHECK(p1.lambda > 0.0);
  CHECK(p2.lambda > p1.lambda);
  CHECK(p1.lambda < 1e-10);
}

TEST_CASE("property: random boundary levels solve the eigenvalue equation") {
  std::mt19937 rng(7130);
  std::uniform_real_distribution<double> ua(0.12, 1.25);
  for (int i = 0; i < 25; ++i) {
    double A = ua(rng);
    auto sp = spectrum::principal_eigenvalue(A);
    CHECK(std::fabs(spectrum::detail::eigen_equation_whittaker(sp.xi, A)) < 1e-9);
    CHECK(sp.lambda == doctest::Approx(0.125 * (1.0 - sp.xi * sp.xi)).epsilon(1e-14));
    CHECK(sp.lambda > 0.0);
    CHECK(sp.lambda < 0.125);
  }
}
