#pragma once

// Quasi-stationary distribution of the Shiryaev martingale diffusion killed
// at its lower boundary A > 0.  The density has the closed form
//
//   q(x) = (C/x) e^{-1/x} { W_{1,xi/2}(2/A) M_{1,xi/2}(2/x)
//                          - M_{1,xi/2}(2/A) W_{1,xi/2}(2/x) },  x >= A,
//
// with xi = sqrt(1 - 8 lambda) and normalizer
//
//   C = sqrt(pi) (A/4) e^{1/A} (xi+1) / (2^xi Gamma(xi/2 + 1)).
//
// At the principal eigenvalue with A below the critical threshold the
// W-branch drops out and the reduced (M-only) form is numerically nicer;
// the model dispatches between the two automatically.

#include <span>
#include <vector>

namespace sqsd::qsd {

// m(x) = (2/x^2) e^{-2/x}; the weight bringing the generator to canonical
// Sturm-Liouville form.
double speed_measure(double x);

// Closed-form normalizer C(A, xi) above.
double normalizer(double A, double xi);

// Eigenfunction phi(x) = x e^{1/x} { B1 M_{1,xi/2}(2/x) + B2 W_{1,xi/2}(2/x) }.
// Square-integrable against m(x) iff B2 = 0 (or lambda = 1/8).
struct Eigenfunction {
  double A;
  double lambda;
  double xi;
  double b1;
  double b2;

  double value(double x) const;

  // M-branch-only eigenfunction (finite norm for lambda < 1/8).
  static Eigenfunction m_branch(double A, double lambda, double b1 = 1.0);
};

// Truncated norm  Int_A^X m(x) phi(x)^2 dx.
double truncated_norm(const Eigenfunction& phi, double X, double tol = 1e-9);

// Residual r(x) = (1/2)(x^2 f)'' - f' + lambda f by 5-point central
// differences with h = max(1e-4, 1e-4 x), for an arbitrary density f.
template <typename F>
double master_equation_residual_of(const F& f, double lambda, double x) {
  double h = x > 1.0 ? 1e-4 * x : 1e-4;
  double qm2 = f(x - 2.0 * h), qm1 = f(x - h), q0 = f(x);
  double qp1 = f(x + h), qp2 = f(x + 2.0 * h);
  auto g = [](double y, double q) { return y * y * q; };
  double d2 = (-g(x - 2.0 * h, qm2) + 16.0 * g(x - h, qm1) - 30.0 * g(x, q0) +
               16.0 * g(x + h, qp1) - g(x + 2.0 * h, qp2)) /
              (12.0 * h * h);
  double d1 = (qm2 - 8.0 * qm1 + 8.0 * qp1 - qp2) / (12.0 * h);
  return 0.5 * d2 - d1 + lambda * q0;
}

class QsdModel {
 public:
  // Principal QSD: lambda = lambda_A from the spectrum module.
  static QsdModel principal(double A);

  // General (bracket) closed form at a given lambda in (0, lambda_A].
  static QsdModel general_form(double A, double lambda);

  // Continuum-family member: requires lambda strictly below lambda_A.
  static QsdModel family(double A, double lambda);

  double boundary() const { return A_; }
  double lambda() const { return lambda_; }
  double xi() const { return xi_; }
  double normalizer() const { return C_; }
  bool is_family() const { return family_; }
  bool uses_reduced_form() const { return reduced_; }

  // pdf; zero for x < A.  Tiny negative round-off inside the evaluation's own
  // error bar clamps to zero; anything beyond it is an internal error.
  double pdf(double x) const;

  // cdf; zero for x <= A, tends to 1 as x -> inf.  A result outside
  // [-1e-12, 1 + 1e-12] is an internal error; the return is clamped to [0,1].
  double cdf(double x) const;

  // Monotone inversion of the cdf: |cdf(result) - p| <= 1e-9.
  double quantile(double p) const;

  // Batch quantiles for ascending probabilities, reusing brackets.
  std::vector<double> quantiles_sorted(std::span<const double> p_ascending) const;

  // phi(x, lambda) with coefficients matching pdf = m * phi.
  double eigenfunction(double x) const;
  Eigenfunction eigenfunction_coeffs() const;

  // Residual of (1/2)(x^2 q)'' - q' + lambda q by 5-point central differences
  // with h = max(1e-4, 1e-4 x); grid points must be interior (x - 2h > A).
  std::vector<double> master_equation_residual(std::span<const double> x_grid) const;

  // pdf ~ c x^{-1 - tail_decay()} as x -> inf (log factors aside).
  double tail_decay() const;

 private:
  QsdModel() = default;

  double A_ = 0.0;
  double lambda_ = 0.0;
  double xi_ = 0.0;
  double C_ = 0.0;
  bool family_ = false;
  bool reduced_ = false;

  // cached boundary-argument values (z = 2/A)
  double m1A_ = 0.0;       // M_{1,xi/2}(2/A)
  double w1A_ = 0.0;       // W_{1,xi/2}(2/A)
  double m1A_err_ = 0.0;   // absolute error bound on m1A_
  double w1A_err_ = 0.0;
  double denom_red_ = 0.0;  // e^{-1/A} M_{0,xi/2}(2/A), reduced-form denominator

  void fill_general_cache();
};

}  // namespace sqsd::qsd
