#include "oracle.hpp"

#include <cmath>
#include <algorithm>

#include <json.hpp>

#include "errors.hpp"
#include "qsd_model.hpp"
#include "quadrature.hpp"
#include "sde_sim.hpp"
#include "special_functions.hpp"
#include "spectrum.hpp"

namespace sqsd::oracle {

namespace {

constexpr long double kSqrtPi = 1.77245385090551602729816748334114518L;

long double whit_m_ld(double a, double b, double z) {
  return sf::detail::whittaker_prefactor(b, z) *
         sf::detail::kummer_series(static_cast<long double>(b) - a + 0.5L,
                                   1.0L + 2.0L * static_cast<long double>(b), z)
             .value;
}

double rel_residual(long double lhs, long double rhs) {
  long double scale = std::fmax(std::fabs(lhs), std::fabs(rhs));
  if (scale == 0.0L) return 0.0;
  return static_cast<double>(std::fabs(lhs - rhs) / scale);
}

}  // namespace

GrResiduals check_gr_integrals(double xi, double A, double x) {
  if (!(xi >= 0.0) || !(xi < 1.0)) throw DomainError("check_gr_integrals: xi in [0,1)");
  if (!(A > 0.0) || !(x > A)) throw DomainError("check_gr_integrals: need x > A > 0");
  double b = 0.5 * xi;
  GrResiduals out{0.0, 0.0};
  for (double t : {2.0 / A, 2.0 / x}) {
    // M identity; integrand ~ y^{b-1/2} at 0, flattened by y = s^2
    auto fm = [b](double s) {
      double y = s * s;
      if (y == 0.0) return 0.0;
      return 2.0 * s * std::exp(-0.5 * y) * sf::whittaker_m({1.0, b, y}).value / y;
    };
    auto im = quad::integrate_adaptive(fm, 0.0, std::sqrt(t), 1e-11);
    double rhs_m = std::exp(-0.5 * t) * sf::whittaker_m({0.0, b, t}).value / (b + 0.5);
    out.m_identity = std::fmax(out.m_identity, std::fabs(im.value - rhs_m));

    // W identity; integrand ~ y^{-1/2-b} at 0 needs a stronger power
    int p = static_cast<int>(std::ceil(1.5 / (0.5 - b))) + 2;
    auto fw = [b, p](double s) {
      if (s == 0.0) return 0.0;
      double y = std::pow(s, p);
      return p * std::pow(s, p - 1.0) * std::exp(-0.5 * y) *
             sf::whittaker_w({1.0, b, y}).value / y;
    };
    auto iw = quad::integrate_adaptive(fw, 0.0, std::pow(t, 1.0 / p), 1e-11);
    double rhs_w = -std::exp(-0.5 * t) * sf::whittaker_w({0.0, b, t}).value;
    out.w_identity = std::fmax(out.w_identity, std::fabs(iw.value - rhs_w));
  }
  return out;
}

double check_simplification_identity(std::span<const double> b_grid,
                                     std::span<const double> z_grid) {
  double worst = 0.0;
  for (double b : b_grid) {
    if (!(b >= 0.0) || !(b < 0.5)) {
      throw DomainError("check_simplification_identity: b must lie in [0, 0.5)");
    }
    for (double z : z_grid) {
      long double rhs = static_cast<long double>(z) * std::pow(2.0L, 2.0L * b) *
                        tgammal(1.0L + b) / (kSqrtPi * (b + 0.5L));
      long double m1 = whit_m_ld(1.0, b, z);
      long double m0 = whit_m_ld(0.0, b, z);
      long double w1 = sf::whittaker_w({1.0, b, z}).value;
      long double w0 = sf::whittaker_w({0.0, b, z}).value;
      long double lhs = w0 * m1 + m0 * w1 / (b + 0.5L);
      worst = std::fmax(worst, rel_residual(lhs, rhs));
      if (b == 0.0) {
        long double m0b = sf::whittaker_m0_bessel(b, z).value;
        long double w0b = sf::whittaker_w0_bessel(b, z).value;
        long double lhs_bessel = w0b * m1 + m0b * w1 / (b + 0.5L);
        worst = std::fmax(worst, rel_residual(lhs_bessel, rhs));
      }
    }
  }
  return worst;
}

double check_connection_identity(std::span<const double> a_values,
                                 std::span<const double> b_grid,
                                 std::span<const double> z_grid) {
  double worst = 0.0;
  for (double a : a_values) {
    for (double b : b_grid) {
      if (!(b > 0.0) || !(b < 0.5)) {
        throw DomainError("check_connection_identity: b must lie in (0, 0.5)");
      }
      for (double z : z_grid) {
        long double c1 = tgammal(-2.0L * b) / tgammal(0.5L - b - a);
        long double c2 = tgammal(2.0L * b) / tgammal(0.5L + b - a);
        long double rhs = c1 * whit_m_ld(a, b, z) + c2 * whit_m_ld(a, -b, z);
        long double lhs = sf::whittaker_w({a, b, z}).value;
        worst = std::fmax(worst, static_cast<double>(std::fabs(lhs - rhs) / std::fabs(lhs)));
      }
    }
  }
  return worst;
}

double normalizer_unsimplified(double A, double xi) {
  if (!(A > 0.0)) throw DomainError("normalizer_unsimplified: A must be > 0");
  if (!(xi >= 0.0) || !(xi < 1.0)) throw DomainError("normalizer_unsimplified: xi in [0,1)");
  double b = 0.5 * xi;
  double z = 2.0 / A;
  long double w0 = sf::whittaker_w({0.0, b, z}).value;
  long double w1 = sf::whittaker_w({1.0, b, z}).value;
  long double m0 = whit_m_ld(0.0, b, z);
  long double m1 = whit_m_ld(1.0, b, z);
  long double denom = w0 * m1 + 2.0L / (xi + 1.0L) * m0 * w1;
  return static_cast<double>(std::exp(static_cast<long double>(1.0) / A) / denom);
}

std::vector<NormalizerCell> check_normalizer_equivalence(
    std::span<const double> A_grid, std::span<const double> xi_grid) {
  std::vector<NormalizerCell> out;
  out.reserve(A_grid.size() * xi_grid.size());
  for (double A : A_grid) {
    for (double xi : xi_grid) {
      double c_long = normalizer_unsimplified(A, xi);
      double c_short = qsd::normalizer(A, xi);
      out.push_back({A, xi, rel_residual(c_long, c_short)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregated suite
// ---------------------------------------------------------------------------

Suite suite_from_name(std::string_view name) {
  if (name == "analytic") return Suite::kAnalytic;
  if (name == "mc") return Suite::kMc;
  if (name == "all") return Suite::kAll;
  throw DomainError("unknown suite '" + std::string(name) + "' (use analytic|mc|all)");
}

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::kAnalytic: return "analytic";
    case Suite::kMc: return "mc";
    case Suite::kAll: return "all";
  }
  return "?";
}

namespace {

void add_check(ValidationReport& rep, std::string name, double residual, double tol) {
  rep.checks.push_back({std::move(name), residual, tol, residual <= tol});
}

void analytic_checks(ValidationReport& rep, double A) {
  qsd::QsdModel model = qsd::QsdModel::principal(A);

  // boundary value against the peak scale
  double peak = 0.0;
  for (int i = 1; i <= 256; ++i) {
    double inv_x = (1.0 / A) * i / 257.0;
    peak = std::fmax(peak, model.pdf(1.0 / inv_x));
  }
  add_check(rep, "boundary_pdf_zero", model.pdf(A) / peak, 1e-10);

  // normalization over the full support
  auto f = [&model](double x) { return model.pdf(x); };
  double X1 = std::fmax(10.0 * A, A + 10.0);
  auto head = quad::integrate_adaptive(f, A, X1, 4e-10);
  int p = static_cast<int>(std::ceil(3.0 / model.tail_decay()));
  auto tail = quad::integrate_reciprocal_tail(f, X1, 4e-10, p);
  add_check(rep, "pdf_normalization", std::fabs(head.value + tail.value - 1.0), 1e-8);

  // closed-form cdf against quadrature of the pdf, 50 grid points
  {
    double worst = 0.0;
    double acc = 0.0;
    double prev = A;
    for (int i = 1; i <= 50; ++i) {
      double inv_x = (1.0 / A) * (1.0 - static_cast<double>(i) / 51.0);
      double x = 1.0 / inv_x;
      acc += quad::integrate_adaptive(f, prev, x, 2e-10).value;
      worst = std::fmax(worst, std::fabs(acc - model.cdf(x)));
      prev = x;
    }
    add_check(rep, "cdf_matches_quadrature", worst, 1e-8);
  }

  // cdf derivative vs pdf at interior points
  {
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
      double x = A * (1.0 + i);
      double h = 1e-5 * x;
      double d = (model.cdf(x + h) - model.cdf(x - h)) / (2.0 * h);
      double q = model.pdf(x);
      if (q > 1e-12) worst = std::fmax(worst, std::fabs(d - q) / q);
    }
    add_check(rep, "cdf_pdf_consistency", worst, 1e-6);
  }

  // master equation residual on an interior grid
  {
    std::vector<double> grid;
    double qmax = 0.0;
    for (int i = 0; i < 100; ++i) {
      double x = A * 1.1 + (20.0 * A - A * 1.1) * i / 99.0;
      grid.push_back(x);
      qmax = std::fmax(qmax, model.pdf(x));
    }
    auto res = model.master_equation_residual(grid);
    double worst = 0.0;
    for (double r : res) worst = std::fmax(worst, std::fabs(r));
    add_check(rep, "master_equation", worst / qmax, 1e-6);
  }

  // reduced (M-only) form vs the general bracket form at the eigenvalue
  {
    double worst = 0.0;
    if (model.uses_reduced_form()) {
      qsd::QsdModel general = qsd::QsdModel::general_form(A, model.lambda());
      for (int i = 1; i <= 20; ++i) {
        double x = A * (1.0 + 0.8 * i);
        worst = std::fmax(worst, rel_residual(model.pdf(x), general.pdf(x)));
        worst = std::fmax(worst, std::fabs(model.cdf(x) - general.cdf(x)));
      }
    } else {
      // supercritical: the two normalizer expressions are the remaining pair
      worst = rel_residual(normalizer_unsimplified(A, 0.0), qsd::normalizer(A, 0.0));
    }
    add_check(rep, "reduced_vs_general_form", worst, 1e-9);
  }

  // integral identities behind the closed-form cdf; the W-side endpoint
  // exponent -1/2 - b crowds -1 as xi -> 1, so cap the instantiation
  {
    GrResiduals gr = check_gr_integrals(std::fmin(model.xi(), 0.9), A, 2.0 * A + 1.0);
    add_check(rep, "gr_integral_m", gr.m_identity, 1e-8);
    add_check(rep, "gr_integral_w", gr.w_identity, 1e-8);
  }

  // Whittaker identities
  {
    const double bs[] = {0.0, 0.05, 0.15, 0.25, 0.35, 0.45, 0.49};
    const double zs[] = {0.1, 0.5, 2.0, 2.0 / A, 8.0, 20.0};
    add_check(rep, "simplification_identity",
              check_simplification_identity(bs, zs), 1e-9);
    const double as[] = {0.0, 1.0};
    const double bsc[] = {0.06, 0.15, 0.25, 0.35, 0.45};
    add_check(rep, "connection_identity", check_connection_identity(as, bsc, zs),
              1e-9);
  }

  // normalizer equivalence on the xi grid at this A
  {
    const double As[] = {A};
    const double xis[] = {0.0, 0.3, 0.7, 0.99};
    double worst = 0.0;
    for (const auto& cell : check_normalizer_equivalence(As, xis)) {
      worst = std::fmax(worst, cell.rel_dev);
    }
    add_check(rep, "normalizer_equivalence", worst, 1e-9);
  }
}

void mc_checks(ValidationReport& rep, double A) {
  qsd::QsdModel model = qsd::QsdModel::principal(A);
  const bool subcritical = model.uses_reduced_form();

  // At or above the critical threshold the eigenvalue sits at the spectrum
  // cutoff: survival decays like t^{-3/2} e^{-lambda t} and the conditional
  // law converges only polynomially, so the run is shorter, wider, and judged
  // against a noise + convergence envelope; the plain slope estimator is
  // replaced by the cutoff-aware fit.
  sim::SimConfig cfg;
  cfg.A = A;
  cfg.x0 = 2.0 * A;
  cfg.dt = 2e-3;
  cfg.horizon = subcritical ? 30.0 : 24.0;
  cfg.n_paths = subcritical ? 50'000 : 100'000;
  cfg.seed = 987654321;
  sim::KilledPathEnsemble ens = sim::simulate(cfg);

  double n_surv = static_cast<double>(ens.survivors.size());
  double ks_tol = subcritical ? 0.06 : 1.5 / std::sqrt(std::fmax(n_surv, 1.0)) +
                                           4.5 / cfg.horizon;
  add_check(rep, "mc_ks_distance", sim::ks_distance(ens, model), ks_tol);

  double rate = sim::estimate_kill_rate(ens);
  double lam = model.lambda();
  if (subcritical) {
    add_check(rep, "mc_kill_rate", std::fabs(rate - lam) / lam, 0.2);
  } else {
    // the slope overshoots lambda by up to kappa ln2/(H/2) with kappa <= 3/2;
    // a wrong eigenvalue falls outside this window
    double hi = lam + 3.0 * std::log(2.0) / cfg.horizon + 0.02;
    double lo = 0.95 * lam;
    double excess = std::fmax(0.0, std::fmax(lo - rate, rate - hi)) / lam;
    add_check(rep, "mc_kill_rate_window", excess, 1e-9);
  }
}

}  // namespace

ValidationReport run_suite(double A, Suite suite) {
  if (!(A > 0.0)) throw DomainError("run_suite: A must be > 0");
  ValidationReport rep;
  rep.A = A;
  if (suite != Suite::kMc) analytic_checks(rep, A);
  if (suite != Suite::kAnalytic) mc_checks(rep, A);

  rep.pass = true;
  double worst_ratio = -1.0;
  for (const Check& c : rep.checks) {
    rep.pass = rep.pass && c.pass;
    double ratio = c.residual / c.tol;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      rep.worst_offender = c.name;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON round-trip
// ---------------------------------------------------------------------------

std::string ValidationReport::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["A"] = A;
  j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"residual", c.residual},
                           {"tol", c.tol},
                           {"pass", c.pass}});
  }
  j["pass"] = pass;
  j["worst_offender"] = worst_offender;
  return j.dump(indent);
}

ValidationReport ValidationReport::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ValidationReport rep;
  rep.A = j.at("A").get<double>();
  for (const auto& c : j.at("checks")) {
    rep.checks.push_back({c.at("name").get<std::string>(),
                          c.at("residual").get<double>(),
                          c.at("tol").get<double>(), c.at("pass").get<bool>()});
  }
  rep.pass = j.at("pass").get<bool>();
  if (j.contains("worst_offender")) {
    rep.worst_offender = j.at("worst_offender").get<std::string>();
  }
  return rep;
}

}  // namespace sqsd::oracle
