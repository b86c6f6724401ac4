#pragma once

// Principal-eigenvalue problem for the killed Shiryaev diffusion on [A, inf):
// the smallest eigenvalue lambda_A of the generator with an absorbing
// boundary at A.  lambda_A solves M_{1, xi/2}(2/A) = 0 with
// xi = sqrt(1 - 8 lambda) for A below the critical threshold A*, and is
// pinned at the spectrum cutoff 1/8 for A >= A*.

#include <span>
#include <string_view>
#include <vector>

namespace sqsd::spectrum {

enum class Regime {
  kSubcritical,             // A < A*, lambda_A in (0, 1/8)
  kCriticalOrSupercritical  // A >= A*, lambda_A = 1/8
};

std::string_view regime_name(Regime r);

struct SpectralPoint {
  double A;
  double lambda;  // in (0, 1/8]
  double xi;      // sqrt(1 - 8 lambda), in [0, 1)
  Regime regime;
};

// xi = sqrt(1 - 8 lambda); domain (0, 1/8].
double xi_of_lambda(double lambda);

// lambda = (1 - xi^2)/8; domain [0, 1).
double lambda_of_xi(double xi);

// The critical boundary level A*: unique root of M_{1,0}(2/A) = 0 on
// [1.0, 1.6], about 1.265857361.  Computed once, then cached.
double critical_threshold();

// Solves for lambda_A.  Root-finding is done in xi (tolerance 1e-12); the
// supercritical branch returns lambda = 0.125 exactly.
SpectralPoint principal_eigenvalue(double A);

// Pointwise principal_eigenvalue over a strictly ascending positive grid.
std::vector<SpectralPoint> eigenvalue_curve(std::span<const double> A_grid);

namespace detail {

// Kummer-kernel form of the eigenvalue equation: same zeros in xi as
// M_{1, xi/2}(2/A), without the positive Whittaker prefactor.
double eigen_equation_kummer(double xi, double A);

// Whittaker-form residual M_{1, xi/2}(2/A) (what the equation literally states).
double eigen_equation_whittaker(double xi, double A);

}  // namespace detail

}  // namespace sqsd::spectrum
