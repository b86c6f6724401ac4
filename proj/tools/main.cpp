// sqsd command-line front end.  Talks to the shared library exclusively
// through the C API in shiryaev_qsd.h; all output is deterministic for a
// given command line (config echo included, no timestamps).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiryaev_qsd.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitValidationFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

int exit_code_for(sqsd_status st) {
  switch (st) {
    case SQSD_OK: return 0;
    case SQSD_ERR_DOMAIN:
    case SQSD_ERR_CONVERGENCE: return kExitUsage;
    case SQSD_ERR_BUDGET: return kExitBudget;
    default: return kExitInternal;
  }
}

[[noreturn]] void fail(sqsd_status st) {
  std::cerr << "error: " << sqsd_last_error() << "\n";
  std::exit(exit_code_for(st));
}

void check(sqsd_status st) {
  if (st != SQSD_OK) fail(st);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file " << out_path << "\n";
    std::exit(kExitUsage);
  }
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
}

std::string csv_header_comment(const std::string& cmd, const ordered_json& config) {
  return "# shiryaev-qsd v" + std::string(sqsd_version()) + " " + cmd +
         " config=" + config.dump() + "\n";
}

struct ModelHandle {
  sqsd_model* m = nullptr;
  ~ModelHandle() { sqsd_model_free(m); }
};

struct EnsembleHandle {
  sqsd_ensemble* e = nullptr;
  ~EnsembleHandle() { sqsd_ensemble_free(e); }
};

struct JsonString {
  char* s = nullptr;
  ~JsonString() { sqsd_string_free(s); }
};

// ---- eigenvalue ----

int cmd_eigenvalue(double A, const std::string& format, const std::string& out) {
  sqsd_spectral_point sp{};
  check(sqsd_principal_eigenvalue(A, &sp));
  double a_star = 0.0;
  check(sqsd_critical_threshold(&a_star));
  const char* regime = sp.supercritical ? "critical-or-supercritical" : "subcritical";
  if (format == "text") {
    emit("A=" + fmt17(sp.A) + " lambda=" + fmt17(sp.lambda) + " xi=" + fmt17(sp.xi) +
             " regime=" + regime + " A*=" + fmt17(a_star) + "\n",
         out);
  } else {
    ordered_json j;
    j["version"] = sqsd_version();
    j["config"] = {{"A", A}};
    j["A"] = sp.A;
    j["lambda"] = sp.lambda;
    j["xi"] = sp.xi;
    j["regime"] = regime;
    j["critical_threshold"] = a_star;
    emit(j.dump(2) + "\n", out);
  }
  return 0;
}

// ---- curve ----

int cmd_curve(double a_min, double a_max, unsigned n, const std::string& format,
              const std::string& out) {
  if (!(a_min > 0.0) || !(a_min < a_max) || n < 2) {
    std::cerr << "error: need 0 < min < max and n >= 2\n";
    return kExitUsage;
  }
  std::vector<double> grid(n);
  for (unsigned i = 0; i < n; ++i) {
    grid[i] = a_min + (a_max - a_min) * i / (n - 1.0);
  }
  std::vector<sqsd_spectral_point> pts(n);
  check(sqsd_eigenvalue_curve(grid.data(), n, pts.data()));
  ordered_json config = {{"min", a_min}, {"max", a_max}, {"n", n}};
  if (format == "json") {
    ordered_json j;
    j["version"] = sqsd_version();
    j["config"] = config;
    auto rows = ordered_json::array();
    for (const auto& p : pts) {
      rows.push_back({{"A", p.A}, {"lambda", p.lambda}, {"xi", p.xi}});
    }
    j["rows"] = rows;
    emit(j.dump(2) + "\n", out);
  } else {
    std::string body = csv_header_comment("curve", config);
    body += "A,lambda,xi\n";
    for (const auto& p : pts) {
      body += fmt17(p.A) + "," + fmt17(p.lambda) + "," + fmt17(p.xi) + "\n";
    }
    emit(body, out);
  }
  return 0;
}

// ---- dist ----

int cmd_dist(double A, double lambda, bool lambda_set, unsigned n,
             const std::string& format, const std::string& out) {
  if (n < 2) {
    std::cerr << "error: need n >= 2\n";
    return kExitUsage;
  }
  ModelHandle mh;
  if (lambda_set) {
    check(sqsd_model_create_family(A, lambda, &mh.m));
  } else {
    check(sqsd_model_create_principal(A, &mh.m));
  }
  double mA = 0, mlam = 0, mxi = 0, mC = 0;
  int fam = 0;
  check(sqsd_model_info(mh.m, &mA, &mlam, &mxi, &mC, &fam));
  ordered_json config = {{"A", A}, {"n", n}, {"lambda", mlam}, {"family", fam != 0}};

  struct Row {
    double x, inv_x, pdf, cdf;
  };
  std::vector<Row> rows;
  rows.reserve(n);
  for (unsigned i = 1; i <= n; ++i) {
    double inv_x = (1.0 / A) * i / static_cast<double>(n);
    double x = 1.0 / inv_x;
    double pdf = 0, cdf = 0;
    check(sqsd_pdf(mh.m, x, &pdf));
    check(sqsd_cdf(mh.m, x, &cdf));
    rows.push_back({x, inv_x, pdf, cdf});
  }
  if (format == "json") {
    ordered_json j;
    j["version"] = sqsd_version();
    j["config"] = config;
    auto arr = ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"x", r.x}, {"inv_x", r.inv_x}, {"pdf", r.pdf}, {"cdf", r.cdf}});
    }
    j["rows"] = arr;
    emit(j.dump(2) + "\n", out);
  } else {
    std::string body = csv_header_comment("dist", config);
    body += "x,inv_x,pdf,cdf\n";
    for (const auto& r : rows) {
      body += fmt17(r.x) + "," + fmt17(r.inv_x) + "," + fmt17(r.pdf) + "," +
              fmt17(r.cdf) + "\n";
    }
    emit(body, out);
  }
  return 0;
}

// ---- simulate ----

int cmd_simulate(const sqsd_sim_config& cfg, const std::string& out) {
  EnsembleHandle eh;
  check(sqsd_simulate(&cfg, &eh.e));
  JsonString ens_json;
  check(sqsd_ensemble_to_json(eh.e, &ens_json.s));
  ordered_json j = ordered_json::parse(ens_json.s);

  if (cfg.A > 0.0) {
    ModelHandle mh;
    check(sqsd_model_create_principal(cfg.A, &mh.m));
    double lam = 0;
    check(sqsd_model_info(mh.m, nullptr, &lam, nullptr, nullptr, nullptr));
    j["lambda_A"] = lam;
    double ks = 0;
    if (sqsd_ks_distance(eh.e, mh.m, &ks) == SQSD_OK) {
      j["ks"] = ks;
    } else {
      j["ks"] = nullptr;
      j["ks_note"] = sqsd_last_error();
    }
    double rate = 0;
    if (sqsd_estimate_kill_rate(eh.e, &rate) == SQSD_OK) {
      j["kill_rate_estimate"] = rate;
    } else {
      j["kill_rate_estimate"] = nullptr;
      j["kill_rate_note"] = sqsd_last_error();
    }
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

// ---- validate ----

int cmd_validate(double A, const std::string& suite, const std::string& out) {
  JsonString rep;
  int pass = 0;
  check(sqsd_run_validation(A, suite.c_str(), &rep.s, &pass));
  ordered_json j = ordered_json::parse(rep.s);
  j["version"] = sqsd_version();
  j["config"] = {{"A", A}, {"suite", suite}};
  emit(j.dump(2) + "\n", out);
  return pass ? 0 : kExitValidationFail;
}

// ---- sf eval (debug) ----

int cmd_sf_eval(const std::string& fn, double a, double b, double z,
                double alpha, double beta, double x, const std::string& format,
                const std::string& out) {
  sqsd_eval ev{};
  if (fn == "gamma") {
    double v = 0;
    check(sqsd_sf_gamma(x, &v));
    ev.value = v;
    ev.est_rel_error = 0.0;
    std::snprintf(ev.method, sizeof ev.method, "%s", "lanczos");
  } else if (fn == "kummer_m") {
    check(sqsd_sf_kummer_m(alpha, beta, z, &ev));
  } else if (fn == "tricomi_u") {
    check(sqsd_sf_tricomi_u(alpha, beta, z, &ev));
  } else if (fn == "whittaker_m") {
    check(sqsd_sf_whittaker_m(a, b, z, &ev));
  } else if (fn == "whittaker_w") {
    check(sqsd_sf_whittaker_w(a, b, z, &ev));
  } else {
    std::cerr << "error: unknown function '" << fn << "'\n";
    return kExitUsage;
  }
  if (format == "text") {
    emit("value=" + fmt17(ev.value) + " est_rel_error=" + fmt17(ev.est_rel_error) +
             " method=" + ev.method + "\n",
         out);
  } else {
    ordered_json j;
    j["version"] = sqsd_version();
    j["config"] = {{"fn", fn}, {"a", a},         {"b", b},    {"z", z},
                   {"alpha", alpha}, {"beta", beta}, {"x", x}};
    j["value"] = ev.value;
    j["est_rel_error"] = ev.est_rel_error;
    j["method"] = ev.method;
    emit(j.dump(2) + "\n", out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-stationary distribution of the killed Shiryaev diffusion"};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  std::string out_path;
  app.add_option("--out", out_path, "output path (default stdout)")->capture_default_str();

  // eigenvalue
  double eig_A = 1.0;
  std::string eig_fmt = "json";
  auto* eig = app.add_subcommand("eigenvalue", "solve for the principal eigenvalue lambda_A");
  eig->add_option("--A", eig_A, "kill boundary A > 0")->required();
  eig->add_option("--format", eig_fmt, "json|text")->check(CLI::IsMember({"json", "text"}));

  // curve
  double cv_min = 0.05, cv_max = 1.27;
  unsigned cv_n = 200;
  std::string cv_fmt = "csv";
  auto* curve = app.add_subcommand("curve", "lambda_A over an A grid (CSV)");
  curve->add_option("--min", cv_min, "smallest A")->required();
  curve->add_option("--max", cv_max, "largest A")->required();
  curve->add_option("--n", cv_n, "grid size")->required();
  curve->add_option("--format", cv_fmt, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  // dist
  double ds_A = 1.0, ds_lambda = 0.0;
  unsigned ds_n = 500;
  std::string ds_fmt = "csv";
  auto* dist = app.add_subcommand("dist", "pdf/cdf over an even grid in 1/x");
  dist->add_option("--A", ds_A, "kill boundary A > 0")->required();
  auto* lam_opt = dist->add_option("--lambda", ds_lambda,
                                   "family member lambda in (0, lambda_A); principal QSD when omitted");
  dist->add_option("--n", ds_n, "grid size");
  dist->add_option("--format", ds_fmt, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  // simulate
  sqsd_sim_config sc{2.0, 4.0, 1e-3, 40.0, 100000, 7, 256, 0};
  auto* sim = app.add_subcommand("simulate", "killed-path Monte Carlo vs the closed form");
  sim->add_option("--A", sc.A, "kill boundary (0 disables killing)")->required();
  sim->add_option("--x0", sc.x0, "headstart > A")->required();
  sim->add_option("--dt", sc.dt, "Euler step");
  sim->add_option("--horizon", sc.horizon, "time horizon");
  sim->add_option("--paths", sc.n_paths, "number of paths");
  sim->add_option("--seed", sc.seed, "RNG seed");
  sim->add_option("--bins", sc.n_bins, "survival-curve bins");
  sim->add_option("--threads", sc.n_threads, "worker threads (0 = auto)");

  // validate
  double va_A = 1.0;
  std::string va_suite = "analytic";
  auto* val = app.add_subcommand("validate", "run the cross-check suite");
  val->add_option("--A", va_A, "kill boundary A > 0")->required();
  val->add_option("--suite", va_suite, "analytic|mc|all");

  // sf eval (debug, hidden from help)
  std::string sf_fn, sf_fmt = "text";
  double sf_a = 0, sf_b = 0, sf_z = 1, sf_alpha = 0, sf_beta = 1, sf_x = 1;
  auto* sf = app.add_subcommand("sf", "");
  sf->group("");
  auto* sf_eval = sf->add_subcommand("eval", "evaluate a special-function kernel");
  sf_eval->add_option("--fn", sf_fn, "gamma|kummer_m|tricomi_u|whittaker_m|whittaker_w")->required();
  sf_eval->add_option("--a", sf_a, "Whittaker first index");
  sf_eval->add_option("--b", sf_b, "Whittaker second index");
  sf_eval->add_option("--z", sf_z, "argument");
  sf_eval->add_option("--alpha", sf_alpha, "Kummer/Tricomi first parameter");
  sf_eval->add_option("--beta", sf_beta, "Kummer/Tricomi second parameter");
  sf_eval->add_option("--x", sf_x, "gamma argument");
  sf_eval->add_option("--format", sf_fmt, "text|json")->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (eig->parsed()) return cmd_eigenvalue(eig_A, eig_fmt, out_path);
    if (curve->parsed()) return cmd_curve(cv_min, cv_max, cv_n, cv_fmt, out_path);
    if (dist->parsed()) {
      return cmd_dist(ds_A, ds_lambda, lam_opt->count() > 0, ds_n, ds_fmt, out_path);
    }
    if (sim->parsed()) return cmd_simulate(sc, out_path);
    if (val->parsed()) return cmd_validate(va_A, va_suite, out_path);
    if (sf->parsed() && sf_eval->parsed()) {
      return cmd_sf_eval(sf_fn, sf_a, sf_b, sf_z, sf_alpha, sf_beta, sf_x, sf_fmt, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  std::cerr << "error: no subcommand\n";
  return kExitUsage;
}
