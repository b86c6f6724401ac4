#pragma once

// Euler-Maruyama simulation of the killed Shiryaev SDE
//   dX = dt + X dB,   X_0 = x0 > A,
// with kill-on-grid at the first step where X <= A.  Paths own disjoint,
// seed-derived substreams, so an ensemble is bitwise reproducible from its
// config regardless of the number of worker threads.

#include <cstdint>
#include <span>
#include <vector>

namespace sqsd { namespace qsd { class QsdModel; } }

namespace sqsd::sim {

struct SimConfig {
  double A = 2.0;       // kill boundary; A = 0 disables killing
  double x0 = 3.0;      // headstart, > A
  double dt = 1e-3;
  double horizon = 10.0;
  std::uint64_t n_paths = 10000;
  std::uint64_t seed = 1;
  unsigned n_bins = 256;  // survival-curve resolution
};

struct KilledPathEnsemble {
  SimConfig config;
  std::vector<double> survivors;         // X at the horizon, in path order
  std::vector<double> survivors_sorted;  // cached for cdf / KS queries
  std::vector<double> bin_times;         // t_j = (j+1) horizon / n_bins
  std::vector<std::uint64_t> alive_counts;  // paths with kill time > t_j
  std::uint64_t n_killed = 0;
};

// Total Euler steps a single run may spend; override with the
// SQSD_STEP_BUDGET environment variable (plain integer).
std::uint64_t step_budget();

// n_threads = 0 picks a hardware-based default.  Throws BudgetError when
// n_paths * round(horizon/dt) exceeds the step budget.
KilledPathEnsemble simulate(const SimConfig& config, unsigned n_threads = 0);

// Fraction of survivors at or below x; requires at least one survivor.
double empirical_cdf(const KilledPathEnsemble& ens, double x);

// sup_x |empirical cdf - model cdf| over the survivor sample; requires at
// least 100 survivors.
double ks_distance(const KilledPathEnsemble& ens, const qsd::QsdModel& model);

// Negative slope of the least-squares line through ln(survival fraction)
// over the late window [horizon/2, horizon]; needs >= 10 nonempty bins there.
double estimate_kill_rate(const KilledPathEnsemble& ens);

// Fit core used by estimate_kill_rate, exposed for synthetic-data checks.
double fit_log_survival_slope(std::span<const double> times,
                              std::span<const std::uint64_t> counts,
                              std::uint64_t n_paths, double t_lo, double t_hi);

// Kill rate with the spectrum-cutoff correction: fits
//   ln S(t) = a - kappa ln t - lambda t
// over the same late window and returns lambda.  At boundaries at or above
// the critical threshold the plain slope overshoots by roughly kappa/t
// (survival decays like t^{-3/2} e^{-lambda t} there); this estimator does not.
double estimate_kill_rate_cutoff_aware(const KilledPathEnsemble& ens);

namespace detail {

// SplitMix64 stream; one instance per path, derived from (seed, path index).
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path_index);

  std::uint64_t next_u64();
  double uniform();  // (0, 1]
  double normal();   // Box-Muller pair, second value cached

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

}  // namespace sqsd::sim
