#include "qsd_model.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"
#include "rootfind.hpp"
#include "special_functions.hpp"
#include "spectrum.hpp"

namespace sqsd::qsd {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411452;

struct Ev {
  long double v;
  long double err;  // absolute
};

// M_{a,b}(z) in long double with a propagated absolute error bound.
Ev whit_m(double a, double b, double z) {
  long double pref = sf::detail::whittaker_prefactor(b, z);
  auto s = sf::detail::kummer_series(static_cast<long double>(b) - a + 0.5L,
                                     1.0L + 2.0L * static_cast<long double>(b), z);
  return {pref * s.value, pref * s.abs_err + std::fabs(pref * s.value) * 1e-18L};
}

Ev whit_w(double a, double b, double z) {
  sf::EvalResult r = sf::whittaker_w({a, b, z});
  long double v = r.value;
  return {v, std::fabs(v) * static_cast<long double>(r.est_rel_error)};
}

}  // namespace

double speed_measure(double x) {
  if (!(x > 0.0)) throw DomainError("speed_measure: x must be > 0");
  return (2.0 / (x * x)) * std::exp(-2.0 / x);
}

double normalizer(double A, double xi) {
  if (!(A > 0.0)) throw DomainError("normalizer: A must be > 0");
  if (!(xi >= 0.0) || !(xi < 1.0)) throw DomainError("normalizer: xi must lie in [0, 1)");
  return kSqrtPi * 0.25 * A * std::exp(1.0 / A) * (xi + 1.0) /
         (std::pow(2.0, xi) * sf::gamma_fn(0.5 * xi + 1.0));
}

// ---------------------------------------------------------------------------
// Eigenfunction
// ---------------------------------------------------------------------------

double Eigenfunction::value(double x) const {
  if (!(x > 0.0)) throw DomainError("eigenfunction: x must be > 0");
  double z = 2.0 / x;
  double b = 0.5 * xi;
  long double acc = 0.0L;
  if (b1 != 0.0) acc += static_cast<long double>(b1) * whit_m(1.0, b, z).v;
  if (b2 != 0.0) acc += static_cast<long double>(b2) * whit_w(1.0, b, z).v;
  return static_cast<double>(x * std::exp(1.0L / x) * acc);
}

Eigenfunction Eigenfunction::m_branch(double A, double lambda, double b1) {
  if (!(A > 0.0)) throw DomainError("eigenfunction: A must be > 0");
  double xi = spectrum::xi_of_lambda(lambda);
  return {A, lambda, xi, b1, 0.0};
}

double truncated_norm(const Eigenfunction& phi, double X, double tol) {
  if (!(X > phi.A)) throw DomainError("truncated_norm: X must exceed A");
  auto f = [&phi](double x) {
    double p = phi.value(x);
    return speed_measure(x) * p * p;
  };
  return quad::integrate_adaptive(f, phi.A, X, tol).value;
}

// ---------------------------------------------------------------------------
// QsdModel
// ---------------------------------------------------------------------------

QsdModel QsdModel::principal(double A) {
  if (!(A > 0.0)) throw DomainError("QsdModel: A must be > 0");
  spectrum::SpectralPoint sp = spectrum::principal_eigenvalue(A);
  QsdModel m;
  m.A_ = A;
  m.lambda_ = sp.lambda;
  m.xi_ = sp.xi;
  m.C_ = qsd::normalizer(A, sp.xi);
  m.family_ = false;
  if (sp.regime == spectrum::Regime::kSubcritical) {
    m.reduced_ = true;
    double b = 0.5 * sp.xi;
    Ev m0A = whit_m(0.0, b, 2.0 / A);
    m.denom_red_ = static_cast<double>(std::exp(-1.0L / A) * m0A.v);
    Ev m1A = whit_m(1.0, b, 2.0 / A);
    m.m1A_ = static_cast<double>(m1A.v);  // eigen-equation residual, ~0
    m.m1A_err_ = static_cast<double>(m1A.err);
  } else {
    m.reduced_ = false;
    m.fill_general_cache();
  }
  return m;
}

QsdModel QsdModel::general_form(double A, double lambda) {
  if (!(A > 0.0)) throw DomainError("QsdModel: A must be > 0");
  double lambda_A = spectrum::principal_eigenvalue(A).lambda;
  if (!(lambda > 0.0) || !(lambda <= lambda_A)) {
    throw DomainError("QsdModel: lambda must lie in (0, lambda_A]");
  }
  QsdModel m;
  m.A_ = A;
  m.lambda_ = lambda;
  m.xi_ = spectrum::xi_of_lambda(lambda);
  m.C_ = qsd::normalizer(A, m.xi_);
  m.family_ = lambda < lambda_A;
  m.reduced_ = false;
  m.fill_general_cache();
  return m;
}

QsdModel QsdModel::family(double A, double lambda) {
  double lambda_A = spectrum::principal_eigenvalue(A).lambda;
  if (!(lambda > 0.0) || !(lambda < lambda_A)) {
    throw DomainError("QsdModel::family: lambda must lie strictly inside (0, lambda_A)");
  }
  return general_form(A, lambda);
}

void QsdModel::fill_general_cache() {
  double b = 0.5 * xi_;
  double z = 2.0 / A_;
  Ev m1 = whit_m(1.0, b, z);
  Ev w1 = whit_w(1.0, b, z);
  m1A_ = static_cast<double>(m1.v);
  w1A_ = static_cast<double>(w1.v);
  m1A_err_ = static_cast<double>(m1.err);
  w1A_err_ = static_cast<double>(w1.err);
}

double QsdModel::pdf(double x) const {
  if (!(x > 0.0) || std::isnan(x)) throw DomainError("pdf: x must be positive");
  if (x < A_) return 0.0;
  double z = 2.0 / x;
  double b = 0.5 * xi_;
  long double pref;
  long double bracket;
  long double err;
  if (reduced_) {
    Ev m1x = whit_m(1.0, b, z);
    pref = (static_cast<long double>(xi_) + 1.0L) / (2.0L * x) * std::exp(-1.0L / x) /
           denom_red_;
    bracket = m1x.v;
    err = m1x.err + std::fabs(static_cast<long double>(m1A_)) + m1A_err_;
  } else {
    Ev m1x = whit_m(1.0, b, z);
    Ev w1x = whit_w(1.0, b, z);
    long double t1 = static_cast<long double>(w1A_) * m1x.v;
    long double t2 = static_cast<long double>(m1A_) * w1x.v;
    pref = static_cast<long double>(C_) / x * std::exp(-1.0L / x);
    bracket = t1 - t2;
    err = std::fabs(w1A_) * m1x.err + w1A_err_ * std::fabs(m1x.v) +
          std::fabs(m1A_) * w1x.err + m1A_err_ * std::fabs(w1x.v) +
          (std::fabs(t1) + std::fabs(t2)) * 1e-16L;
  }
  long double q = pref * bracket;
  if (q < 0.0L) {
    if (-q <= 50.0L * pref * err + 1e-300L) return 0.0;
    throw InternalError("pdf: negative value beyond round-off at x=" + std::to_string(x));
  }
  return static_cast<double>(q);
}

double QsdModel::cdf(double x) const {
  if (!(x > 0.0) || std::isnan(x)) throw DomainError("cdf: x must be positive");
  if (x <= A_) return 0.0;
  double z = 2.0 / x;
  double b = 0.5 * xi_;
  long double v;
  if (reduced_) {
    Ev m0x = whit_m(0.0, b, z);
    v = 1.0L - std::exp(-1.0L / x) * m0x.v / denom_red_;
  } else {
    Ev w0x = whit_w(0.0, b, z);
    Ev m0x = whit_m(0.0, b, z);
    long double bracket = w0x.v * m1A_ +
                          2.0L / (static_cast<long double>(xi_) + 1.0L) * m0x.v * w1A_;
    v = 1.0L - static_cast<long double>(C_) * std::exp(-1.0L / x) * bracket;
  }
  if (v < -1e-12L || v > 1.0L + 1e-12L) {
    throw InternalError("cdf: value outside [0,1] at x=" + std::to_string(x));
  }
  if (v < 0.0L) return 0.0;
  if (v > 1.0L) return 1.0;
  return static_cast<double>(v);
}

double QsdModel::quantile(double p) const {
  if (!(p > 0.0) || !(p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  double lo = A_;
  double off = std::fmax(A_, 1.0);
  double hi = A_ + off;
  int doublings = 0;
  while (cdf(hi) < p) {
    off *= 2.0;
    hi = A_ + off;
    if (++doublings > 200) {
      throw ConvergenceError("quantile: bracket expansion failed");
    }
  }
  auto f = [this, p](double x) { return cdf(x) - p; };
  double x = sqsd::detail::brent_root(f, lo, hi, -p, cdf(hi) - p, 1e-13 * hi, 1e-10);
  return x;
}

std::vector<double> QsdModel::quantiles_sorted(std::span<const double> p_ascending) const {
  std::vector<double> out;
  out.reserve(p_ascending.size());
  double lo = A_;
  double prev_p = 0.0;
  for (double p : p_ascending) {
    if (!(p > 0.0) || !(p < 1.0)) throw DomainError("quantiles_sorted: p must lie in (0, 1)");
    if (p < prev_p) throw DomainError("quantiles_sorted: probabilities must ascend");
    prev_p = p;
    double off = std::fmax(0.5 * (lo - A_), std::fmax(A_, 1.0) * 1e-3);
    double hi = lo + off;
    int doublings = 0;
    while (cdf(hi) < p) {
      off *= 2.0;
      hi = lo + off;
      if (++doublings > 200) {
        throw ConvergenceError("quantiles_sorted: bracket expansion failed");
      }
    }
    auto f = [this, p](double x) { return cdf(x) - p; };
    double x = sqsd::detail::brent_root(f, lo, hi, cdf(lo) - p, cdf(hi) - p, 1e-13 * hi, 1e-10);
    out.push_back(x);
    lo = x;
  }
  return out;
}

Eigenfunction QsdModel::eigenfunction_coeffs() const {
  if (reduced_) {
    return {A_, lambda_, xi_, (xi_ + 1.0) / (4.0 * denom_red_), 0.0};
  }
  return {A_, lambda_, xi_, 0.5 * C_ * w1A_, -0.5 * C_ * m1A_};
}

double QsdModel::eigenfunction(double x) const {
  if (!(x >= A_)) throw DomainError("eigenfunction: x must be >= A");
  return eigenfunction_coeffs().value(x);
}

std::vector<double> QsdModel::master_equation_residual(std::span<const double> x_grid) const {
  std::vector<double> out;
  out.reserve(x_grid.size());
  auto q = [this](double x) { return pdf(x); };
  for (double x : x_grid) {
    double h = std::fmax(1e-4, 1e-4 * x);
    if (!(x - 2.0 * h > A_)) {
      throw DomainError("master_equation_residual: grid point too close to the boundary");
    }
    out.push_back(master_equation_residual_of(q, lambda_, x));
  }
  return out;
}

double QsdModel::tail_decay() const {
  // reduced form: q ~ x^{-(3+xi)/2}; general form keeps the slower
  // x^{-(3-xi)/2} branch (with a log factor at xi = 0).
  return reduced_ ? 0.5 * (1.0 + xi_) : 0.5 * (1.0 - xi_);
}

}  // namespace sqsd::qsd
