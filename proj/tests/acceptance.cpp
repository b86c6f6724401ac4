// Acceptance suite: prints one pass/fail line per criterion and exits with
// the number of failed criteria.  Criterion 8 is exercised at its exact
// stated configuration; the supercritical spectrum-cutoff kinematics make it
// statistically unattainable there (survival carries a t^{-3/2} factor, so
// ~60 of 2e5 paths survive to the horizon), and the line reports the
// measured values rather than loosening the thresholds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "qsd_model.hpp"
#include "quadrature.hpp"
#include "sde_sim.hpp"
#include "special_functions.hpp"
#include "spectrum.hpp"

using namespace sqsd;

namespace {

int g_failures = 0;

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void report(int criterion, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL",
              criterion, detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double pdf_mass(const qsd::QsdModel& m, double tol) {
  auto f = [&m](double x) { return m.pdf(x); };
  double A = m.boundary();
  double X1 = std::fmax(10.0 * A, A + 10.0);
  auto head = quad::integrate_adaptive(f, A, X1, tol);
  int p = static_cast<int>(std::ceil(3.0 / m.tail_decay()));
  auto tail = quad::integrate_reciprocal_tail(f, X1, tol, p);
  return head.value + tail.value;
}

void criterion_1() {
  double t0 = now();
  double a_star = spectrum::critical_threshold();
  double dev = std::fabs(a_star - 1.265857361);
  report(1, dev <= 1e-8,
         "critical threshold A* = " + fmt(a_star) + ", |dev| = " + fmt(dev) +
             " <= 1e-8",
         now() - t0);
}

void criterion_2() {
  double t0 = now();
  bool pass = true;
  for (double A : {1.266, 2.0, 5.0, 10.0, 20.09}) {
    pass = pass && (spectrum::principal_eigenvalue(A).lambda == 0.125);
  }
  report(2, pass, "lambda_A = 0.125 exactly for A in {1.266, 2, 5, 10, 20.09}",
         now() - t0);
}

void criterion_3() {
  double t0 = now();
  bool pass = true;
  double prev = 0.0, worst_resid = 0.0;
  std::vector<double> lambdas;
  for (double A : {0.1, 0.3, 0.6, 0.9, 1.2}) {
    auto sp = spectrum::principal_eigenvalue(A);
    pass = pass && sp.lambda > prev && sp.lambda > 0.0 && sp.lambda < 0.125;
    prev = sp.lambda;
    double resid = std::fabs(spectrum::detail::eigen_equation_whittaker(sp.xi, A));
    worst_resid = std::fmax(worst_resid, resid);
    lambdas.push_back(sp.lambda);
  }
  pass = pass && worst_resid < 1e-9;
  // shape: rapid growth to the 1/8 plateau
  pass = pass && lambdas.front() < 0.01 && lambdas.back() > 0.12;
  report(3, pass,
         "subcritical curve strictly increasing in (0, 0.125), max residual = " +
             fmt(worst_resid) + " < 1e-9, plateau shape",
         now() - t0);
}

void criterion_4() {
  double t0 = now();
  bool pass = true;
  std::string detail;
  for (double A : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    auto m = qsd::QsdModel::principal(A);

    double peak = 0.0;
    for (int i = 1; i <= 256; ++i) {
      peak = std::fmax(peak, m.pdf(A / (i / 257.0)));
    }
    bool a_ok = std::fabs(m.pdf(A)) <= 1e-10 * peak;

    bool b_ok = std::fabs(pdf_mass(m, 4e-10) - 1.0) <= 1e-8;

    auto f = [&m](double x) { return m.pdf(x); };
    double acc = 0.0, prev = A, worst = 0.0;
    for (int i = 1; i <= 50; ++i) {
      double x = A / (1.0 - static_cast<double>(i) / 51.0);
      acc += quad::integrate_adaptive(f, prev, x, 2e-10).value;
      worst = std::fmax(worst, std::fabs(acc - m.cdf(x)));
      prev = x;
    }
    bool c_ok = worst <= 1e-8;

    std::vector<double> grid;
    double qmax = 0.0;
    for (int i = 0; i < 100; ++i) {
      grid.push_back(A * (1.1 + 18.9 * i / 99.0));
      qmax = std::fmax(qmax, m.pdf(grid.back()));
    }
    double rmax = 0.0;
    for (double r : m.master_equation_residual(grid)) {
      rmax = std::fmax(rmax, std::fabs(r));
    }
    bool d_ok = rmax <= 1e-6 * qmax;

    if (!(a_ok && b_ok && c_ok && d_ok)) {
      pass = false;
      detail += " A=" + fmt(A) + "[" + (a_ok ? "" : "a") + (b_ok ? "" : "b") +
                (c_ok ? "" : "c") + (d_ok ? "" : "d") + "]";
    }
  }
  report(4, pass,
         pass ? "boundary value, unit mass, cdf vs quadrature, master equation "
                "on A in {0.1, 0.5, 1, 2, 5, 10}"
              : "failed sub-criteria:" + detail,
         now() - t0);
}

void criterion_5() {
  double t0 = now();
  std::vector<double> As{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::vector<double> xis{0.0, 0.3, 0.7, 0.99};
  double worst = 0.0;
  for (const auto& cell : oracle::check_normalizer_equivalence(As, xis)) {
    worst = std::fmax(worst, cell.rel_dev);
  }
  report(5, worst <= 1e-9,
         "normalizer expressions agree to " + fmt(worst) + " <= 1e-9 on the full grid",
         now() - t0);
}

void criterion_6() {
  double t0 = now();
  std::vector<double> bs{0.0, 0.05, 0.15, 0.25, 0.35, 0.45, 0.49};
  std::vector<double> zs{0.1, 0.5, 2.0, 5.0, 10.0, 14.0, 20.0};
  double simp = oracle::check_simplification_identity(bs, zs);
  std::vector<double> as{0.0, 1.0};
  std::vector<double> bc{0.06, 0.15, 0.25, 0.35, 0.45, 0.49};
  double conn = oracle::check_connection_identity(as, bc, zs);
  bool pass = simp <= 1e-9 && conn <= 1e-9;
  report(6, pass,
         "connection identity " + fmt(conn) + " and product identity " + fmt(simp) +
             " <= 1e-9 on b in [0, 0.5), z in [0.1, 20]",
         now() - t0);
}

void criterion_7() {
  double t0 = now();
  bool pass = true;
  std::string detail;

  for (double lam : {0.03, 0.06, 0.10}) {
    auto fam = qsd::QsdModel::family(2.0, lam);
    bool positive = true;
    for (int i = 0; i <= 30; ++i) {
      double x = 2.0 * std::pow(500.0, i / 30.0) * 1.001;
      positive = positive && fam.pdf(x) > 0.0;
    }
    double mass = pdf_mass(fam, 1e-8);
    bool ok = positive && std::fabs(mass - 1.0) <= 1e-6;
    if (!ok) {
      pass = false;
      detail += " family(2," + fmt(lam) + ") mass=" + fmt(mass);
    }
  }

  // square-integrability dichotomy at A = 1, lambda = lambda_A - 1e-3
  double lam = qsd::QsdModel::principal(1.0).lambda() - 1e-3;
  auto inc = [](const qsd::Eigenfunction& p, double x0, double x1) {
    auto f = [&p](double x) {
      double v = p.value(x);
      return qsd::speed_measure(x) * v * v;
    };
    return quad::integrate_adaptive(f, x0, x1, 1e-12).value;
  };
  auto mb = qsd::Eigenfunction::m_branch(1.0, lam);
  bool converges = true;
  double prev = 1e300;
  for (double e : {2.0, 3.0, 4.0, 5.0, 6.0}) {
    double v = inc(mb, std::pow(10.0, e), std::pow(10.0, e + 1.0));
    converges = converges && v < prev;
    prev = v;
  }
  auto wb = qsd::QsdModel::family(1.0, lam).eigenfunction_coeffs();
  bool diverges = true;
  prev = 0.0;
  for (double e : {15.0, 16.0, 17.0, 18.0}) {
    double v = inc(wb, std::pow(10.0, e), std::pow(10.0, e + 1.0));
    diverges = diverges && v > prev;
    prev = v;
  }
  if (!converges || !diverges) {
    pass = false;
    detail += std::string(" norm dichotomy: M-branch ") +
              (converges ? "ok" : "BAD") + ", W-branch " + (diverges ? "ok" : "BAD");
  }

  report(7, pass,
         pass ? "family members are unit-mass positive densities; eigenfunction "
                "norm converges only on the M branch"
              : "failed:" + detail,
         now() - t0);
}

void criterion_8() {
  double t0 = now();
  sim::SimConfig cfg{2.0, 4.0, 1e-3, 40.0, 200000, 7, 256};
  auto ens = sim::simulate(cfg);
  auto model = qsd::QsdModel::principal(2.0);

  // raw sup-distance (the sample is below the ks_distance precondition of
  // 100 survivors at this configuration)
  const auto& s = ens.survivors_sorted;
  double n = static_cast<double>(s.size());
  double ks = 1.0;
  if (!s.empty()) {
    ks = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      double F = model.cdf(s[i]);
      ks = std::fmax(ks, std::fabs((i + 1.0) / n - F));
      ks = std::fmax(ks, std::fabs(F - static_cast<double>(i) / n));
    }
  }
  double rate = sim::estimate_kill_rate(ens);
  bool ks_ok = ks < 0.02;
  bool rate_ok = std::fabs(rate - 0.125) / 0.125 <= 0.15;
  report(8, ks_ok && rate_ok,
         "A=2 x0=4 dt=1e-3 horizon=40 paths=2e5 seed=7: KS = " + fmt(ks) +
             " (need < 0.02), slope = " + fmt(rate) +
             " (need within 15% of 0.125); survivors = " + fmt(n) +
             " -- survival at the spectrum cutoff decays like t^{-3/2} e^{-t/8}, "
             "so this configuration cannot meet the stated bounds",
         now() - t0);
}

void criterion_9() {
  double t0 = now();
  sim::SimConfig cfg{0.0, 1.0, 1e-3, 5.0, 100000, 5, 8};
  auto ens = sim::simulate(cfg);
  double sum = 0.0, sum2 = 0.0;
  for (double x : ens.survivors) {
    double d = x - 1.0 - 5.0;
    sum += d;
    sum2 += d * d;
  }
  double n = static_cast<double>(cfg.n_paths);
  double mean = sum / n;
  double se = std::sqrt((sum2 - n * mean * mean) / (n - 1.0)) / std::sqrt(n);
  bool pass = std::fabs(mean) <= 3.0 * se;
  report(9, pass,
         "unkilled mean drift error " + fmt(mean) + " within 3 SE (" + fmt(3.0 * se) +
             ") at T=5, 1e5 paths",
         now() - t0);
}

}  // namespace

int main() {
  std::printf("shiryaev-qsd acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures;
}
