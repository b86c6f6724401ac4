#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "qsd_model.hpp"
#include "sde_sim.hpp"
#include "spectrum.hpp"

using namespace sqsd;
using sim::SimConfig;

namespace {

// ensemble assembled from given survivor values, for estimator tests
sim::KilledPathEnsemble synthetic_survivors(std::vector<double> values) {
  sim::KilledPathEnsemble ens;
  ens.config = SimConfig{2.0, 4.0, 1e-3, 1.0, values.size(), 0, 8};
  ens.survivors = values;
  std::sort(values.begin(), values.end());
  ens.survivors_sorted = std::move(values);
  return ens;
}

}  // namespace

TEST_CASE("single Euler step matches the hand-computed update") {
  sim::detail::PathRng rng(42, 0);
  double z = rng.normal();
  double x0 = 3.0, dt = 0.01;
  double expect = x0 + dt + x0 * std::sqrt(dt) * z;

  SimConfig c{2.0, x0, dt, dt, 1, 42, 1};
  auto ens = sim::simulate(c);
  REQUIRE(ens.survivors.size() == 1);
  // cross-TU fp contraction may differ by an ulp
  CHECK(ens.survivors[0] == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("identical seeds give identical ensembles, independent of threads") {
  SimConfig c{1.0, 2.0, 1e-2, 3.0, 4000, 99, 32};
  auto a = sim::simulate(c, 1);
  auto b = sim::simulate(c, 2);
  auto d = sim::simulate(c);
  CHECK(a.survivors == b.survivors);
  CHECK(a.survivors == d.survivors);
  CHECK(a.alive_counts == b.alive_counts);
  CHECK(a.n_killed == b.n_killed);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(sim::simulate(SimConfig{2.0, 1.5, 1e-3, 1.0, 10, 1, 8}),
                  DomainError);  // x0 <= A
  CHECK_THROWS_AS(sim::simulate(SimConfig{2.0, 3.0, 0.0, 1.0, 10, 1, 8}), DomainError);
  CHECK_THROWS_AS(sim::simulate(SimConfig{2.0, 3.0, 1e-3, 1.0, 0, 1, 8}), DomainError);
  CHECK_THROWS_AS(sim::simulate(SimConfig{2.0, 3.0, 2.0, 1.0, 10, 1, 8}), DomainError);
  // step budget: n_paths * steps overflows the default budget
  CHECK_THROWS_AS(sim::simulate(SimConfig{2.0, 3.0, 1e-6, 1000.0, 1000000000, 1, 8}),
                  BudgetError);
}

TEST_CASE("martingale property of the unkilled process") {
  // A = 0 disables killing; E[X_T - x0 - T] = 0 holds exactly for the
  // Euler scheme, so the sample mean sits within 3 standard errors
  SimConfig c{0.0, 1.0, 1e-3, 5.0, 100000, 5, 8};
  auto ens = sim::simulate(c);
  REQUIRE(ens.survivors.size() == c.n_paths);
  double s = 0.0, s2 = 0.0;
  for (double x : ens.survivors) {
    double d = x - 1.0 - 5.0;
    s += d;
    s2 += d * d;
  }
  double n = static_cast<double>(c.n_paths);
  double mean = s / n;
  double sd = std::sqrt((s2 - n * mean * mean) / (n - 1.0));
  CHECK(std::fabs(mean) <= 3.0 * sd / std::sqrt(n));
}

TEST_CASE("start just above the boundary dies almost immediately") {
  // pilot-pinned regression: survival 1.41% at this exact config
  SimConfig c{2.0, 2.0 + 1e-12, 1e-3, 1.0, 20000, 11, 64};
  auto ens = sim::simulate(c);
  double frac = static_cast<double>(ens.survivors.size()) / 20000.0;
  CHECK(frac < 0.02);
  CHECK(frac == doctest::Approx(0.0141).epsilon(0.02));
}

TEST_CASE("survival counts are nonincreasing and consistent") {
  SimConfig c{1.0, 2.0, 1e-2, 4.0, 5000, 21, 40};
  auto ens = sim::simulate(c);
  CHECK(ens.n_killed + ens.survivors.size() == c.n_paths);
  for (std::size_t j = 1; j < ens.alive_counts.size(); ++j) {
    CHECK(ens.alive_counts[j] <= ens.alive_counts[j - 1]);
  }
  CHECK(ens.alive_counts.back() == ens.survivors.size());
}

TEST_CASE("empirical cdf") {
  auto ens = synthetic_survivors({1.0, 2.0, 3.0, 4.0});
  CHECK(sim::empirical_cdf(ens, 0.5) == 0.0);
  CHECK(sim::empirical_cdf(ens, 9.0) == 1.0);
  CHECK(sim::empirical_cdf(ens, 2.5) == 0.5);
  auto empty = synthetic_survivors({});
  CHECK_THROWS_AS(sim::empirical_cdf(empty, 1.0), DomainError);
}

TEST_CASE("ks_distance requires a real sample") {
  auto one = synthetic_survivors({3.0});
  auto model = qsd::QsdModel::principal(2.0);
  CHECK_THROWS_AS(sim::ks_distance(one, model), DomainError);
}

TEST_CASE("kill-rate fit: exact on geometric data, zero on constant data") {
  std::vector<double> times;
  std::vector<std::uint64_t> counts;
  double dt_bin = 0.5;
  for (int j = 0; j < 24; ++j) {
    times.push_back((j + 1) * dt_bin);
    counts.push_back(std::uint64_t{1} << (24 - j));  // halves every bin
  }
  double c_exact = std::log(2.0) / dt_bin;
  CHECK(sim::fit_log_survival_slope(times, counts, 1 << 25, 0.0, 12.0) ==
        doctest::Approx(c_exact).epsilon(1e-12));

  std::vector<std::uint64_t> flat(times.size(), 1000);
  CHECK(sim::fit_log_survival_slope(times, flat, 2000, 0.0, 12.0) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(sim::fit_log_survival_slope(times, counts, 1 << 25, 11.0, 12.0),
                  DomainError);  // fewer than 10 bins in the window
}

TEST_CASE("kill rate matches the eigenvalue below the critical threshold") {
  double lam = spectrum::principal_eigenvalue(0.5).lambda;
  SimConfig c{0.5, 1.5, 2e-3, 45.0, 100000, 17, 256};
  auto ens = sim::simulate(c);
  double rate = sim::estimate_kill_rate(ens);
  CHECK(std::fabs(rate - lam) / lam <= 0.15);
}

TEST_CASE("kill rate at a supercritical boundary overshoots by the cutoff "
          "correction") {
  // survival decays like t^{-3/2} e^{-t/8} at the spectrum cutoff, so the
  // window slope sits above lambda by at most ~kappa ln2/(H/2)
  SimConfig c{2.0, 4.0, 2e-3, 24.0, 100000, 17, 256};
  auto ens = sim::simulate(c);
  double rate = sim::estimate_kill_rate(ens);
  CHECK(rate >= 0.125);
  CHECK(rate <= 0.125 + 3.0 * std::log(2.0) / c.horizon + 0.02);
}

TEST_CASE("KS distance shrinks as the horizon grows") {
  // supercritical boundary: polynomially slow convergence, still monotone
  auto m2 = qsd::QsdModel::principal(2.0);
  std::vector<double> ks2;
  for (double H : {5.0, 10.0, 15.0}) {
    SimConfig c{2.0, 4.0, 2e-3, H, 30000, 9, 200};
    ks2.push_back(sim::ks_distance(sim::simulate(c), m2));
  }
  CHECK(ks2[1] < ks2[0]);
  CHECK(ks2[2] < ks2[0]);

  // subcritical boundary: allow one noise inversion per the sample sizes
  auto m05 = qsd::QsdModel::principal(0.5);
  std::vector<double> ks05;
  std::vector<std::size_t> nsurv;
  for (double H : {5.0, 15.0, 40.0}) {
    SimConfig c{0.5, 1.5, 2e-3, H, 30000, 9, 200};
    auto ens = sim::simulate(c);
    ks05.push_back(sim::ks_distance(ens, m05));
    nsurv.push_back(ens.survivors.size());
  }
  int inversions = 0;
  for (int i = 1; i < 3; ++i) {
    double band = 1.36 / std::sqrt(static_cast<double>(nsurv[i]));
    if (ks05[i] > ks05[i - 1] + band) ++inversions;
  }
  CHECK(ks05[2] < ks05[0]);
  CHECK(inversions <= 1);
}

TEST_CASE("KS distance is stable under time-step refinement") {
  auto m = qsd::QsdModel::principal(0.5);
  double ks_coarse = 0.0, ks_fine = 0.0;
  std::size_t n_fine = 0;
  {
    SimConfig c{0.5, 1.5, 4e-3, 20.0, 30000, 13, 100};
    ks_coarse = sim::ks_distance(sim::simulate(c), m);
  }
  {
    SimConfig c{0.5, 1.5, 1e-3, 20.0, 30000, 13, 100};
    auto ens = sim::simulate(c);
    ks_fine = sim::ks_distance(ens, m);
    n_fine = ens.survivors.size();
  }
  double band = 1.36 / std::sqrt(static_cast<double>(n_fine));
  CHECK(ks_fine <= ks_coarse + 2.0 * band);
}

TEST_CASE("resampling through the quantile function reproduces the model") {
  auto model = qsd::QsdModel::principal(2.0);
  const int n = 100000;
  const double crit = 1.95 / std::sqrt(static_cast<double>(n));  // alpha ~ 0.001

  // the sample KS of quantile-mapped uniforms equals the uniform KS up to the
  // 1e-9 quantile tolerance, so the 100-seed acceptance rate can be measured
  // on the uniform side; the full pipeline is exercised on three seeds
  int pass = 0;
  for (int s = 0; s < 100; ++s) {
    std::vector<double> u(n);
    sim::detail::PathRng rng(1000 + s, 0);
    for (auto& v : u) {
      v = rng.uniform();
      if (v >= 1.0) v = 0.5;
    }
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      d = std::fmax(d, (i + 1.0) / n - u[i]);
      d = std::fmax(d, u[i] - static_cast<double>(i) / n);
    }
    if (d <= crit) ++pass;
  }
  CHECK(pass >= 99);

  for (int s = 0; s < 3; ++s) {
    std::vector<double> u(n);
    sim::detail::PathRng rng(1000 + s, 0);
    for (auto& v : u) {
      v = rng.uniform();
      if (v >= 1.0) v = 0.5;
    }
    std::sort(u.begin(), u.end());
    double d_uniform = 0.0;
    for (int i = 0; i < n; ++i) {
      d_uniform = std::fmax(d_uniform, (i + 1.0) / n - u[i]);
      d_uniform = std::fmax(d_uniform, u[i] - static_cast<double>(i) / n);
    }
    auto ens = synthetic_survivors(model.quantiles_sorted(u));
    double d = sim::ks_distance(ens, model);
    CHECK(d <= crit);
    CHECK(std::fabs(d - d_uniform) <= 1e-5);
  }
}

TEST_CASE("a wrong model scores a larger KS distance") {
  auto model = qsd::QsdModel::principal(0.5);
  auto wrong = qsd::QsdModel::family(0.5, 0.5 * model.lambda());
  std::vector<double> u(20000);
  sim::detail::PathRng rng(424242, 0);
  for (auto& v : u) {
    v = rng.uniform();
    if (v >= 1.0) v = 0.5;
  }
  std::sort(u.begin(), u.end());
  auto ens = synthetic_survivors(model.quantiles_sorted(u));
  CHECK(sim::ks_distance(ens, wrong) > 5.0 * sim::ks_distance(ens, model));
}

TEST_CASE("cutoff-aware rate fit agrees with the plain fit on clean "
          "exponential data") {
  std::vector<double> times;
  std::vector<std::uint64_t> counts;
  for (int j = 0; j < 40; ++j) {
    times.push_back(0.5 * (j + 1));
    counts.push_back(static_cast<std::uint64_t>(1e9 * std::exp(-0.07 * times.back())));
  }
  sim::KilledPathEnsemble ens;
  ens.config = SimConfig{1.0, 2.0, 1e-3, 20.0, 1000000000ull, 0, 40};
  ens.bin_times = times;
  ens.alive_counts = counts;
  CHECK(sim::estimate_kill_rate_cutoff_aware(ens) ==
        doctest::Approx(0.07).epsilon(1e-3));
}
