#include "shiryaev_qsd.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "oracle.hpp"
#include "qsd_model.hpp"
#include "sde_sim.hpp"
#include "special_functions.hpp"
#include "spectrum.hpp"
#include "version.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
sqsd_status wrap(Fn&& fn) {
  try {
    fn();
    return SQSD_OK;
  } catch (const sqsd::BudgetError& e) {
    g_last_error = e.what();
    return SQSD_ERR_BUDGET;
  } catch (const sqsd::DomainError& e) {
    g_last_error = e.what();
    return SQSD_ERR_DOMAIN;
  } catch (const sqsd::ConvergenceError& e) {
    g_last_error = e.what();
    return SQSD_ERR_CONVERGENCE;
  } catch (const std::bad_alloc& e) {
    g_last_error = "out of memory";
    return SQSD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SQSD_ERR_INTERNAL;
  }
}

sqsd_status require(bool ok, const char* msg) {
  if (ok) return SQSD_OK;
  g_last_error = msg;
  return SQSD_ERR_DOMAIN;
}

void fill_eval(const sqsd::sf::EvalResult& r, sqsd_eval* out) {
  out->value = r.value;
  out->est_rel_error = r.est_rel_error;
  std::snprintf(out->method, sizeof out->method, "%s",
                std::string(sqsd::sf::method_name(r.method)).c_str());
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

const sqsd::qsd::QsdModel* as_model(const sqsd_model* m) {
  return reinterpret_cast<const sqsd::qsd::QsdModel*>(m);
}

const sqsd::sim::KilledPathEnsemble* as_ensemble(const sqsd_ensemble* e) {
  return reinterpret_cast<const sqsd::sim::KilledPathEnsemble*>(e);
}

}  // namespace

extern "C" {

const char* sqsd_version(void) { return sqsd::kVersion; }

const char* sqsd_last_error(void) { return g_last_error.c_str(); }

void sqsd_string_free(char* s) { delete[] s; }

/* ---- spectrum ---- */

sqsd_status sqsd_critical_threshold(double* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] { *out = sqsd::spectrum::critical_threshold(); });
}

sqsd_status sqsd_principal_eigenvalue(double A, sqsd_spectral_point* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] {
    auto sp = sqsd::spectrum::principal_eigenvalue(A);
    *out = {sp.A, sp.lambda, sp.xi,
            sp.regime == sqsd::spectrum::Regime::kCriticalOrSupercritical ? 1 : 0};
  });
}

sqsd_status sqsd_eigenvalue_curve(const double* A_grid, size_t n,
                                  sqsd_spectral_point* out) {
  if (auto st = require(A_grid && out && n > 0, "null grid or empty input")) return st;
  return wrap([&] {
    auto pts = sqsd::spectrum::eigenvalue_curve({A_grid, n});
    for (size_t i = 0; i < pts.size(); ++i) {
      out[i] = {pts[i].A, pts[i].lambda, pts[i].xi,
                pts[i].regime == sqsd::spectrum::Regime::kCriticalOrSupercritical ? 1 : 0};
    }
  });
}

/* ---- distribution ---- */

sqsd_status sqsd_model_create_principal(double A, sqsd_model** out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] {
    auto* m = new sqsd::qsd::QsdModel(sqsd::qsd::QsdModel::principal(A));
    *out = reinterpret_cast<sqsd_model*>(m);
  });
}

sqsd_status sqsd_model_create_family(double A, double lambda, sqsd_model** out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] {
    auto* m = new sqsd::qsd::QsdModel(sqsd::qsd::QsdModel::family(A, lambda));
    *out = reinterpret_cast<sqsd_model*>(m);
  });
}

void sqsd_model_free(sqsd_model* m) {
  delete reinterpret_cast<sqsd::qsd::QsdModel*>(m);
}

sqsd_status sqsd_model_info(const sqsd_model* m, double* A, double* lambda,
                            double* xi, double* C, int* is_family) {
  if (auto st = require(m != nullptr, "null model")) return st;
  const auto* model = as_model(m);
  if (A) *A = model->boundary();
  if (lambda) *lambda = model->lambda();
  if (xi) *xi = model->xi();
  if (C) *C = model->normalizer();
  if (is_family) *is_family = model->is_family() ? 1 : 0;
  return SQSD_OK;
}

sqsd_status sqsd_pdf(const sqsd_model* m, double x, double* out) {
  if (auto st = require(m && out, "null model or output")) return st;
  return wrap([&] { *out = as_model(m)->pdf(x); });
}

sqsd_status sqsd_cdf(const sqsd_model* m, double x, double* out) {
  if (auto st = require(m && out, "null model or output")) return st;
  return wrap([&] { *out = as_model(m)->cdf(x); });
}

sqsd_status sqsd_quantile(const sqsd_model* m, double p, double* out) {
  if (auto st = require(m && out, "null model or output")) return st;
  return wrap([&] { *out = as_model(m)->quantile(p); });
}

sqsd_status sqsd_speed_measure(double x, double* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] { *out = sqsd::qsd::speed_measure(x); });
}

/* ---- special functions ---- */

sqsd_status sqsd_sf_gamma(double x, double* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] { *out = sqsd::sf::gamma_fn(x); });
}

sqsd_status sqsd_sf_kummer_m(double alpha, double beta, double z, sqsd_eval* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] { fill_eval(sqsd::sf::kummer_m(alpha, beta, z), out); });
}

sqsd_status sqsd_sf_tricomi_u(double alpha, double beta, double z, sqsd_eval* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] { fill_eval(sqsd::sf::tricomi_u(alpha, beta, z), out); });
}

sqsd_status sqsd_sf_whittaker_m(double a, double b, double z, sqsd_eval* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] { fill_eval(sqsd::sf::whittaker_m({a, b, z}), out); });
}

sqsd_status sqsd_sf_whittaker_w(double a, double b, double z, sqsd_eval* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return wrap([&] { fill_eval(sqsd::sf::whittaker_w({a, b, z}), out); });
}

/* ---- simulation ---- */

sqsd_status sqsd_simulate(const sqsd_sim_config* cfg, sqsd_ensemble** out) {
  if (auto st = require(cfg && out, "null config or output")) return st;
  return wrap([&] {
    sqsd::sim::SimConfig c;
    c.A = cfg->A;
    c.x0 = cfg->x0;
    c.dt = cfg->dt;
    c.horizon = cfg->horizon;
    c.n_paths = cfg->n_paths;
    c.seed = cfg->seed;
    c.n_bins = cfg->n_bins == 0 ? 256 : cfg->n_bins;
    auto* e = new sqsd::sim::KilledPathEnsemble(
        sqsd::sim::simulate(c, cfg->n_threads));
    *out = reinterpret_cast<sqsd_ensemble*>(e);
  });
}

void sqsd_ensemble_free(sqsd_ensemble* e) {
  delete reinterpret_cast<sqsd::sim::KilledPathEnsemble*>(e);
}

size_t sqsd_ensemble_survivor_count(const sqsd_ensemble* e) {
  return e ? as_ensemble(e)->survivors.size() : 0;
}

uint64_t sqsd_ensemble_killed_count(const sqsd_ensemble* e) {
  return e ? as_ensemble(e)->n_killed : 0;
}

size_t sqsd_ensemble_survivors(const sqsd_ensemble* e, double* buf, size_t buf_len) {
  if (!e || !buf) return 0;
  const auto& s = as_ensemble(e)->survivors_sorted;
  size_t n = std::min(buf_len, s.size());
  std::memcpy(buf, s.data(), n * sizeof(double));
  return n;
}

size_t sqsd_ensemble_bin_count(const sqsd_ensemble* e) {
  return e ? as_ensemble(e)->bin_times.size() : 0;
}

sqsd_status sqsd_ensemble_survival_curve(const sqsd_ensemble* e, double* times,
                                         uint64_t* alive_counts, size_t buf_len) {
  if (auto st = require(e && times && alive_counts, "null ensemble or buffers")) return st;
  const auto* ens = as_ensemble(e);
  if (auto st = require(buf_len >= ens->bin_times.size(), "buffer too small")) return st;
  for (size_t i = 0; i < ens->bin_times.size(); ++i) {
    times[i] = ens->bin_times[i];
    alive_counts[i] = ens->alive_counts[i];
  }
  return SQSD_OK;
}

sqsd_status sqsd_ensemble_empirical_cdf(const sqsd_ensemble* e, double x, double* out) {
  if (auto st = require(e && out, "null ensemble or output")) return st;
  return wrap([&] { *out = sqsd::sim::empirical_cdf(*as_ensemble(e), x); });
}

sqsd_status sqsd_ks_distance(const sqsd_ensemble* e, const sqsd_model* m, double* out) {
  if (auto st = require(e && m && out, "null argument")) return st;
  return wrap([&] { *out = sqsd::sim::ks_distance(*as_ensemble(e), *as_model(m)); });
}

sqsd_status sqsd_estimate_kill_rate(const sqsd_ensemble* e, double* out) {
  if (auto st = require(e && out, "null ensemble or output")) return st;
  return wrap([&] { *out = sqsd::sim::estimate_kill_rate(*as_ensemble(e)); });
}

sqsd_status sqsd_ensemble_to_json(const sqsd_ensemble* e, char** out_json) {
  if (auto st = require(e && out_json, "null ensemble or output")) return st;
  return wrap([&] {
    const auto* ens = as_ensemble(e);
    const auto& cfg = ens->config;
    nlohmann::ordered_json j;
    j["version"] = sqsd::kVersion;
    j["config"] = {{"A", cfg.A},       {"x0", cfg.x0},
                   {"dt", cfg.dt},     {"horizon", cfg.horizon},
                   {"paths", cfg.n_paths}, {"seed", cfg.seed},
                   {"bins", cfg.n_bins}};
    j["survivors"] = ens->survivors.size();
    j["killed"] = ens->n_killed;
    // survivor histogram: 50 equal-width bins from A (or min) to max
    nlohmann::ordered_json hist = nlohmann::ordered_json::array();
    if (!ens->survivors_sorted.empty()) {
      double lo = cfg.A > 0.0 ? cfg.A : ens->survivors_sorted.front();
      double hi = ens->survivors_sorted.back();
      const int nb = 50;
      double w = (hi - lo) / nb;
      if (w > 0.0) {
        std::vector<uint64_t> counts(nb, 0);
        for (double v : ens->survivors_sorted) {
          int k = static_cast<int>((v - lo) / w);
          if (k < 0) k = 0;
          if (k >= nb) k = nb - 1;
          ++counts[k];
        }
        for (int k = 0; k < nb; ++k) {
          hist.push_back({{"lo", lo + k * w}, {"hi", lo + (k + 1) * w},
                          {"count", counts[k]}});
        }
      }
    }
    j["survivor_histogram"] = hist;
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (size_t i = 0; i < ens->bin_times.size(); ++i) {
      curve.push_back({{"t", ens->bin_times[i]}, {"alive", ens->alive_counts[i]}});
    }
    j["survival_curve"] = curve;
    *out_json = dup_string(j.dump());
  });
}

/* ---- validation ---- */

sqsd_status sqsd_run_validation(double A, const char* suite, char** out_json,
                                int* overall_pass) {
  if (auto st = require(suite && out_json, "null suite or output")) return st;
  return wrap([&] {
    auto rep = sqsd::oracle::run_suite(A, sqsd::oracle::suite_from_name(suite));
    *out_json = dup_string(rep.to_json());
    if (overall_pass) *overall_pass = rep.pass ? 1 : 0;
  });
}

} /* extern "C" */
