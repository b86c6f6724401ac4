#include "sde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "errors.hpp"
#include "qsd_model.hpp"

namespace sqsd::sim {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

std::uint64_t splitmix_next(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct WorkerOut {
  std::vector<double> survivors;
  std::vector<std::uint64_t> kills_per_bin;
  std::uint64_t n_killed = 0;
};

}  // namespace

namespace detail {

PathRng::PathRng(std::uint64_t seed, std::uint64_t path_index) {
  std::uint64_t a = seed;
  std::uint64_t h1 = splitmix_next(a);
  std::uint64_t b = path_index ^ 0xD1B54A32D192ED03ull;
  std::uint64_t h2 = splitmix_next(b);
  state_ = h1 ^ (h2 + 0x9E3779B97F4A7C15ull * (path_index + 1));
  (void)next_u64();
}

std::uint64_t PathRng::next_u64() { return splitmix_next(state_); }

double PathRng::uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double PathRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = kTwoPi * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

}  // namespace detail

std::uint64_t step_budget() {
  if (const char* env = std::getenv("SQSD_STEP_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 20'000'000'000ull;
}

KilledPathEnsemble simulate(const SimConfig& config, unsigned n_threads) {
  if (config.A < 0.0) throw DomainError("simulate: A must be >= 0");
  if (!(config.x0 > config.A)) throw DomainError("simulate: x0 must exceed A");
  if (!(config.dt > 0.0)) throw DomainError("simulate: dt must be > 0");
  if (!(config.horizon >= config.dt)) throw DomainError("simulate: horizon must be >= dt");
  if (config.n_paths < 1) throw DomainError("simulate: n_paths must be >= 1");
  if (config.n_bins < 1) throw DomainError("simulate: n_bins must be >= 1");

  const std::uint64_t n_steps =
      static_cast<std::uint64_t>(std::llround(config.horizon / config.dt));
  if (n_steps < 1) throw DomainError("simulate: horizon shorter than one step");
  if (n_steps > step_budget() / config.n_paths) {
    throw BudgetError("simulate: n_paths * steps exceeds the step budget (" +
                      std::to_string(step_budget()) + "); set SQSD_STEP_BUDGET to raise it");
  }

  const double dt = config.dt;
  const double sqrt_dt = std::sqrt(dt);
  const double A = config.A;
  const bool kill = A > 0.0;
  const unsigned n_bins = config.n_bins;
  const double bin_dt = config.horizon / n_bins;

  unsigned hw = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = std::max(1u, std::min(hw, 8u));
  n_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(n_threads, config.n_paths));

  std::vector<WorkerOut> parts(n_threads);
  auto run_chunk = [&](std::uint64_t i0, std::uint64_t i1, WorkerOut& out) {
    out.kills_per_bin.assign(n_bins, 0);
    for (std::uint64_t i = i0; i < i1; ++i) {
      detail::PathRng rng(config.seed, i);
      double x = config.x0;
      std::uint64_t killed_step = 0;
      for (std::uint64_t k = 1; k <= n_steps; ++k) {
        x += dt + x * sqrt_dt * rng.normal();
        if (kill && x <= A) {
          killed_step = k;
          break;
        }
      }
      if (killed_step == 0) {
        out.survivors.push_back(x);
      } else {
        ++out.n_killed;
        // first bin time >= kill time
        double tk = static_cast<double>(killed_step) * dt;
        auto j = static_cast<std::uint64_t>(std::ceil(tk / bin_dt - 1e-9)) - 1;
        if (j >= n_bins) j = n_bins - 1;
        ++out.kills_per_bin[j];
      }
    }
  };

  if (n_threads == 1) {
    run_chunk(0, config.n_paths, parts[0]);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (config.n_paths + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      std::uint64_t i0 = t * chunk;
      std::uint64_t i1 = std::min<std::uint64_t>(i0 + chunk, config.n_paths);
      if (i0 >= i1) break;
      pool.emplace_back(run_chunk, i0, i1, std::ref(parts[t]));
    }
    for (auto& th : pool) th.join();
  }

  KilledPathEnsemble ens;
  ens.config = config;
  std::vector<std::uint64_t> kills(n_bins, 0);
  for (const WorkerOut& p : parts) {
    ens.survivors.insert(ens.survivors.end(), p.survivors.begin(), p.survivors.end());
    ens.n_killed += p.n_killed;
    for (unsigned j = 0; j < n_bins && !p.kills_per_bin.empty(); ++j) {
      kills[j] += p.kills_per_bin[j];
    }
  }
  ens.bin_times.resize(n_bins);
  ens.alive_counts.resize(n_bins);
  std::uint64_t cum = 0;
  for (unsigned j = 0; j < n_bins; ++j) {
    cum += kills[j];
    ens.bin_times[j] = (j + 1) * bin_dt;
    ens.alive_counts[j] = config.n_paths - cum;
  }
  ens.survivors_sorted = ens.survivors;
  std::sort(ens.survivors_sorted.begin(), ens.survivors_sorted.end());
  return ens;
}

double empirical_cdf(const KilledPathEnsemble& ens, double x) {
  if (ens.survivors_sorted.empty()) throw DomainError("empirical_cdf: no survivors");
  auto it = std::upper_bound(ens.survivors_sorted.begin(), ens.survivors_sorted.end(), x);
  return static_cast<double>(it - ens.survivors_sorted.begin()) /
         static_cast<double>(ens.survivors_sorted.size());
}

double ks_distance(const KilledPathEnsemble& ens, const qsd::QsdModel& model) {
  const auto& s = ens.survivors_sorted;
  if (s.size() < 100) {
    throw DomainError("ks_distance: need at least 100 survivors, have " +
                      std::to_string(s.size()));
  }
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double F = model.cdf(s[i]);
    d = std::fmax(d, std::fabs((i + 1.0) / n - F));
    d = std::fmax(d, std::fabs(F - static_cast<double>(i) / n));
  }
  return d;
}

double fit_log_survival_slope(std::span<const double> times,
                              std::span<const std::uint64_t> counts,
                              std::uint64_t n_paths, double t_lo, double t_hi) {
  if (times.size() != counts.size()) {
    throw DomainError("fit_log_survival_slope: size mismatch");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi || counts[i] == 0) continue;
    double x = times[i];
    double y = std::log(static_cast<double>(counts[i]) / static_cast<double>(n_paths));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n < 10) {
    throw DomainError("fit_log_survival_slope: fewer than 10 usable bins in the window");
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw DomainError("fit_log_survival_slope: degenerate time grid");
  double slope = (n * sxy - sx * sy) / denom;
  return -slope;
}

double estimate_kill_rate(const KilledPathEnsemble& ens) {
  return fit_log_survival_slope(ens.bin_times, ens.alive_counts,
                                ens.config.n_paths, 0.5 * ens.config.horizon,
                                ens.config.horizon * (1.0 + 1e-12));
}

double estimate_kill_rate_cutoff_aware(const KilledPathEnsemble& ens) {
  // least squares on (1, ln t, t) over the late window
  const double t_lo = 0.5 * ens.config.horizon;
  double m[3][3] = {};
  double rhs[3] = {};
  std::size_t n = 0;
  for (std::size_t i = 0; i < ens.bin_times.size(); ++i) {
    double t = ens.bin_times[i];
    if (t < t_lo || ens.alive_counts[i] == 0) continue;
    double y = std::log(static_cast<double>(ens.alive_counts[i]) /
                        static_cast<double>(ens.config.n_paths));
    double basis[3] = {1.0, std::log(t), t};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
      rhs[r] += basis[r] * y;
    }
    ++n;
  }
  if (n < 10) {
    throw DomainError("estimate_kill_rate_cutoff_aware: fewer than 10 usable bins");
  }
  // Gaussian elimination with partial pivoting on the 3x3 system
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::fabs(m[idx[r]][col]) > std::fabs(m[idx[piv]][col])) piv = r;
    }
    std::swap(idx[col], idx[piv]);
    double d = m[idx[col]][col];
    if (d == 0.0) throw DomainError("estimate_kill_rate_cutoff_aware: singular fit");
    for (int r = col + 1; r < 3; ++r) {
      double f = m[idx[r]][col] / d;
      for (int c = col; c < 3; ++c) m[idx[r]][c] -= f * m[idx[col]][c];
      rhs[idx[r]] -= f * rhs[idx[col]];
    }
  }
  double sol[3];
  for (int r = 2; r >= 0; --r) {
    double acc = rhs[idx[r]];
    for (int c = r + 1; c < 3; ++c) acc -= m[idx[r]][c] * sol[c];
    sol[r] = acc / m[idx[r]][r];
  }
  return -sol[2];
}

}  // namespace sqsd::sim
