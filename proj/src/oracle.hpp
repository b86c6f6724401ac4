#pragma once

// Cross-checking machinery: definite-integral identities behind the closed
// forms, the Whittaker connection and product identities, the two equivalent
// normalizer expressions, and an aggregated pass/fail report.  Residual
// arithmetic runs in long double so the checks do not inherit the double
// rounding of the values they certify.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqsd::oracle {

struct Check {
  std::string name;
  double residual;
  double tol;
  bool pass;
};

struct ValidationReport {
  double A = 0.0;
  std::vector<Check> checks;
  std::string worst_offender;  // largest residual/tol ratio
  bool pass = false;

  std::string to_json(int indent = -1) const;
  static ValidationReport from_json(const std::string& text);
};

// Residuals of the two definite-integral identities used to integrate the
// density in closed form, instantiated at b = xi/2:
//   Int_0^t e^{-y/2} M_{1,b}(y) dy/y  =  e^{-t/2} M_{0,b}(t) / (b + 1/2)
//   Int_0^t e^{-y/2} W_{1,b}(y) dy/y  = -e^{-t/2} W_{0,b}(t)
// evaluated at t = 2/A and t = 2/x.
struct GrResiduals {
  double m_identity;
  double w_identity;
};
GrResiduals check_gr_integrals(double xi, double A, double x);

// max relative residual of
//   W_{0,b} M_{1,b} + M_{0,b} W_{1,b}/(b+1/2) = z 4^b Gamma(1+b) / (sqrt(pi)(b+1/2))
// over the grid; b = 0 entries evaluate the left side through the Bessel path
// as well and report the worse of the two.
double check_simplification_identity(std::span<const double> b_grid,
                                     std::span<const double> z_grid);

// max relative residual of the M/W connection identity over the grid
// (b must stay away from 0 where the Gamma factors blow up).
double check_connection_identity(std::span<const double> a_values,
                                 std::span<const double> b_grid,
                                 std::span<const double> z_grid);

// Normalizer assembled from the four boundary Whittaker values (the long,
// pre-simplification expression).
double normalizer_unsimplified(double A, double xi);

struct NormalizerCell {
  double A;
  double xi;
  double rel_dev;
};
// Relative deviation between the two normalizer expressions per grid cell.
std::vector<NormalizerCell> check_normalizer_equivalence(
    std::span<const double> A_grid, std::span<const double> xi_grid);

enum class Suite { kAnalytic, kMc, kAll };
Suite suite_from_name(std::string_view name);  // throws DomainError on unknown
std::string_view suite_name(Suite s);

// Runs the analytic checks (boundary value, normalization, cdf consistency,
// master equation, reduced-vs-general form, identities, normalizer), plus a
// seeded Monte-Carlo cross-check for the mc/all suites.  Check failures are
// recorded in the report, not thrown.
ValidationReport run_suite(double A, Suite suite = Suite::kAnalytic);

}  // namespace sqsd::oracle
