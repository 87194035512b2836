// sfbm: command-line front end for the subfractional Brownian motion toolkit.
//
// Subcommands: calibrate, simulate, verify, convergence, matrix (build |
// inspect). Global flags: --config <json>, --seed, --workers, --out,
// --no-cache, --json-logs.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error,
// 3 numeric (quadrature or calibration) failure.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "subfbm/covariance.hpp"
#include "subfbm/ensemble_io.hpp"
#include "subfbm/errors.hpp"
#include "subfbm/kernel.hpp"
#include "subfbm/kernel_matrix.hpp"
#include "subfbm/matrix_cache.hpp"
#include "subfbm/parallel.hpp"
#include "subfbm/simulate.hpp"
#include "subfbm/statistics.hpp"
#include "subfbm/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

// Thrown for validation problems detected after flag parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 2026;
  int workers = 0;  // 0 = auto
  std::string out = ".";
  bool no_cache = false;
  bool json_logs = false;
};

void log_event(const GlobalOpts& g, const std::string& event,
               std::initializer_list<std::pair<const char*, std::string>> kv) {
  if (g.json_logs) {
    json j;
    j["event"] = event;
    for (const auto& [k, v] : kv) j[k] = v;
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << event;
    for (const auto& [k, v] : kv) std::cerr << ' ' << k << '=' << v;
    std::cerr << "\n";
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_seconds(double s) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", s);
  return buf;
}

// Maps JSON config fields onto CLI options; an explicitly passed flag always
// wins over the config value, and a field that matches no option of the
// invoked command (or the globals) is a usage error that names itself.
class ConfigBinder {
 public:
  template <typename T>
  void bind(const std::string& key, CLI::Option* opt, T& var) {
    entries_[key] = Entry{opt, [&var, key](const json& v) {
                            try {
                              var = v.get<T>();
                            } catch (const json::exception&) {
                              throw UsageError("config field '" + key +
                                               "' has the wrong type");
                            }
                          }};
  }
  void bind_parsed(const std::string& key, CLI::Option* opt,
                   std::function<void(const std::string&)> parse) {
    entries_[key] = Entry{opt, [parse, key](const json& v) {
                            if (!v.is_string())
                              throw UsageError("config field '" + key +
                                               "' must be a string");
                            parse(v.get<std::string>());
                          }};
  }

  bool try_apply(const std::string& key, const json& value) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    if (it->second.opt != nullptr && it->second.opt->count() > 0)
      return true;  // flag set on the command line wins
    it->second.set(value);
    return true;
  }

 private:
  struct Entry {
    CLI::Option* opt;
    std::function<void(const json&)> set;
  };
  std::map<std::string, Entry> entries_;
};

void apply_config(const std::string& path,
                  const std::vector<const ConfigBinder*>& binders) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object())
    throw UsageError("config file " + path + " must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    bool consumed = false;
    for (const ConfigBinder* b : binders)
      if (b->try_apply(key, value)) {
        consumed = true;
        break;
      }
    if (!consumed)
      throw UsageError("unknown config field '" + key +
                       "' for this command");
  }
}

std::string resolve_out(const GlobalOpts& g, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return name;
  fs::create_directories(g.out);
  return (fs::path(g.out) / p).string();
}

std::string cache_directory(const GlobalOpts& g) {
  if (g.no_cache) return {};
  fs::path dir = fs::path(g.out) / "cache";
  fs::create_directories(dir);
  return dir.string();
}

int effective_workers(const GlobalOpts& g) {
  return g.workers > 0 ? g.workers : subfbm::default_workers();
}

// ---------------------------------------------------------------------------
// Shared command state

struct SpecSource {
  std::string spec_file;
  double hurst = 0.0;
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;

  CLI::Option* opt_spec = nullptr;
  CLI::Option* opt_hurst = nullptr;

  void add_flags(CLI::App* cmd, ConfigBinder& binder, bool with_tols = false) {
    opt_spec = cmd->add_option("--spec-file", spec_file,
                               "Calibrated kernel spec JSON to load");
    opt_hurst = cmd->add_option("--hurst", hurst,
                                "Hurst index; calibrates in-process when no "
                                "spec file is given");
    binder.bind("spec-file", opt_spec, spec_file);
    binder.bind("hurst", opt_hurst, hurst);
    if (with_tols) {
      auto* oa = cmd->add_option("--abs-tol", abs_tol,
                                 "Quadrature absolute tolerance");
      auto* orl = cmd->add_option("--rel-tol", rel_tol,
                                  "Quadrature relative tolerance");
      binder.bind("abs-tol", oa, abs_tol);
      binder.bind("rel-tol", orl, rel_tol);
    }
  }

  bool provided() const {
    return !spec_file.empty() || hurst != 0.0;
  }

  subfbm::KernelSpec load(const GlobalOpts& g, bool need_fbm = false) const {
    if (!spec_file.empty()) {
      if (!fs::exists(spec_file))
        throw UsageError("spec file not found: " + spec_file);
      subfbm::KernelSpec spec = subfbm::load_spec(spec_file);
      if (need_fbm && spec.c_fbm <= 0.0)
        subfbm::calibrate_fbm(spec);
      return spec;
    }
    if (hurst == 0.0)
      throw UsageError("provide --spec-file or --hurst");
    subfbm::QuadratureConfig quad;
    quad.abs_tol = abs_tol;
    quad.rel_tol = rel_tol;
    log_event(g, "calibrate", {{"hurst", fmt_double(hurst)}});
    return need_fbm ? subfbm::calibrate(subfbm::HurstIndex(hurst), quad)
                    : subfbm::calibrate_sub(subfbm::HurstIndex(hurst), quad);
  }
};

subfbm::KernelMatrix obtain(const GlobalOpts& g, subfbm::Scheme scheme, int n,
                            int m, const subfbm::KernelSpec& spec,
                            bool* cache_hit) {
  return subfbm::obtain_matrix(scheme, n, m, spec, cache_directory(g),
                               effective_workers(g), cache_hit);
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateOpts {
  double hurst = 0.0;
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  double self_check_tol = 1e-8;
  std::string output = "spec.json";
};

int cmd_calibrate(const GlobalOpts& g, const CalibrateOpts& o) {
  if (o.hurst == 0.0) throw UsageError("calibrate requires --hurst");
  subfbm::QuadratureConfig quad;
  quad.abs_tol = o.abs_tol;
  quad.rel_tol = o.rel_tol;
  const auto t0 = std::chrono::steady_clock::now();
  subfbm::KernelSpec spec =
      subfbm::calibrate(subfbm::HurstIndex(o.hurst), quad, o.self_check_tol);
  const auto t1 = std::chrono::steady_clock::now();
  const std::string path = resolve_out(g, o.output);
  subfbm::save_spec(path, spec);
  std::cout << "calibrate H=" << o.hurst << " c_sub=" << fmt_double(spec.c_sub)
            << " c_fbm=" << fmt_double(spec.c_fbm) << " wall="
            << fmt_seconds(std::chrono::duration<double>(t1 - t0).count())
            << "s out=" << path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  SpecSource spec;
  std::string scheme = "sub-floor";
  int n = 0;
  int m = 0;
  int paths = 1;
  std::string distribution = "rademacher";
  std::string output = "ensemble.csv";
};

subfbm::PathEnsemble make_ensemble(const GlobalOpts& g, const SimulateOpts& o,
                                   bool* cache_hit, std::uint64_t* checksum) {
  const subfbm::Scheme scheme = subfbm::scheme_from_name(o.scheme);
  const subfbm::Distribution dist =
      subfbm::distribution_from_name(o.distribution);
  if (o.paths < 1) throw UsageError("--paths must be >= 1");
  subfbm::EnsembleConfig cfg;
  cfg.M = o.paths;
  cfg.master_seed = g.seed;
  cfg.distribution = dist;
  cfg.workers = effective_workers(g);
  if (cache_hit) *cache_hit = false;
  if (checksum) *checksum = 0;

  if (scheme == subfbm::Scheme::Donsker) {
    if (o.n < 1) throw UsageError("donsker scheme requires --n >= 1");
    return subfbm::run_donsker_ensemble(o.n, cfg);
  }
  if (scheme == subfbm::Scheme::SubExact)
    throw UsageError("scheme sub-exact is not a grid construction; choose "
                     "donsker, sub-floor, sub-step, sub-wiener, or fbm");
  if (scheme == subfbm::Scheme::SubWiener &&
      dist != subfbm::Distribution::StandardGaussian)
    throw UsageError(
        "scheme sub-wiener models exact Brownian increments and requires "
        "--distribution gaussian");

  int n = o.n, m = o.m;
  if (scheme == subfbm::Scheme::SubWiener) {
    if (m < 1 && n >= 1) m = n;
    if (m < 1) throw UsageError("sub-wiener requires --m >= 1");
    n = m;
  } else if (scheme == subfbm::Scheme::SubStep) {
    if (n < 1 || m < 1)
      throw UsageError("sub-step requires --n and --m, both >= 1");
  } else {
    if (n < 1) throw UsageError("scheme " + o.scheme + " requires --n >= 1");
    m = 0;
  }
  const subfbm::KernelSpec spec =
      o.spec.load(g, scheme == subfbm::Scheme::Fbm);
  const subfbm::KernelMatrix matrix = obtain(g, scheme, n, m, spec, cache_hit);
  if (checksum) *checksum = matrix.checksum();
  return subfbm::run_ensemble(matrix, cfg);
}

int cmd_simulate(const GlobalOpts& g, const SimulateOpts& o) {
  bool cache_hit = false;
  std::uint64_t checksum = 0;
  const auto t0 = std::chrono::steady_clock::now();
  const subfbm::PathEnsemble ens = make_ensemble(g, o, &cache_hit, &checksum);
  const auto t1 = std::chrono::steady_clock::now();
  const std::string path = resolve_out(g, o.output);
  subfbm::save_ensemble(path, ens);
  std::cout << "simulate scheme=" << subfbm::scheme_name(ens.scheme)
            << " n=" << ens.n << " M=" << ens.M << " wall="
            << fmt_seconds(std::chrono::duration<double>(t1 - t0).count())
            << "s cache=" << (cache_hit ? "hit" : "miss") << " out=" << path
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  std::string suite;
  SpecSource spec;
  std::string input;  // existing ensemble CSV
  std::string scheme = "sub-floor";
  int n = 0;
  int m = 0;
  int paths = 0;
  std::string distribution = "gaussian";
  int index = 0;       // gaussianity grid index; 0 = last
  int mc_paths = 20000;
  double z_threshold = 3.0;
  double level = 0.01;
};

json ensemble_meta(const subfbm::PathEnsemble& ens) {
  json j;
  j["scheme"] = subfbm::scheme_name(ens.scheme);
  j["H"] = ens.H;
  j["n"] = ens.n;
  j["m"] = ens.m;
  j["M"] = ens.M;
  j["master_seed"] = ens.master_seed;
  j["distribution"] = subfbm::distribution_name(ens.distribution);
  return j;
}

struct VerifyContext {
  const GlobalOpts& g;
  const VerifyOpts& o;
  std::optional<subfbm::PathEnsemble> ensemble;
  std::optional<subfbm::KernelSpec> spec;

  const subfbm::PathEnsemble& need_ensemble() {
    if (!ensemble) {
      if (!o.input.empty()) {
        ensemble = subfbm::load_ensemble(o.input);
      } else {
        if (o.paths < 1)
          throw UsageError(
              "this suite needs path data: pass --in <ensemble.csv> or "
              "--scheme/--n/--paths to generate one");
        SimulateOpts sim;
        sim.spec = o.spec;
        sim.scheme = o.scheme;
        sim.n = o.n;
        sim.m = o.m;
        sim.paths = o.paths;
        sim.distribution = o.distribution;
        ensemble = make_ensemble(g, sim, nullptr, nullptr);
      }
    }
    return *ensemble;
  }

  const subfbm::KernelSpec& need_spec(double fallback_h = 0.0) {
    if (!spec) {
      if (!o.spec.provided() && fallback_h > 0.0) {
        SpecSource src = o.spec;
        src.hurst = fallback_h;
        spec = src.load(g);
      } else {
        spec = o.spec.load(g);
      }
    }
    return *spec;
  }
};

subfbm::SuiteResult run_one_suite(VerifyContext& ctx, const std::string& name) {
  const VerifyOpts& o = ctx.o;
  if (name == "kernel") {
    return subfbm::verify_kernel(ctx.need_spec());
  }
  if (name == "ladder") {
    subfbm::LadderConfig cfg;
    cfg.seed = ctx.g.seed;
    cfg.mc_paths = o.mc_paths;
    cfg.workers = effective_workers(ctx.g);
    return subfbm::verify_ladder(ctx.need_spec(), cfg);
  }
  if (name == "covariance") {
    const auto& ens = ctx.need_ensemble();
    return subfbm::verify_covariance(ens, subfbm::default_cov_pairs(ens.n),
                                     o.z_threshold);
  }
  if (name == "sandwich") {
    const auto& ens = ctx.need_ensemble();
    return subfbm::verify_sandwich(ens, subfbm::default_increment_pairs(ens.n),
                                   o.z_threshold);
  }
  if (name == "gaussianity") {
    const auto& ens = ctx.need_ensemble();
    const int index = o.index > 0 ? o.index : ens.n;
    double sd = 0.0;
    if (ens.scheme == subfbm::Scheme::Donsker) {
      sd = std::sqrt(static_cast<double>(index) / ens.n);
    } else {
      // The null must use the construction's own finite-n standard deviation:
      // rebuild (or cache-load) the weight matrix and take the row norm.
      const auto& spec = ctx.need_spec(ens.H);
      if (std::abs(spec.H.value() - ens.H) > 1e-12)
        throw UsageError("spec Hurst index does not match the ensemble's");
      const subfbm::KernelMatrix matrix =
          obtain(ctx.g, ens.scheme, ens.n, ens.m, spec, nullptr);
      std::size_t row = 0;
      bool found = false;
      const double t_index = static_cast<double>(index) / ens.n;
      for (std::size_t r = 0; r < matrix.rows(); ++r)
        if (std::abs(matrix.row_times[r] - t_index) < 1e-12) {
          row = r;
          found = true;
        }
      if (!found)
        throw UsageError("gaussianity index has no matching matrix row");
      sd = std::sqrt(matrix.row_sum_squares(row));
    }
    return subfbm::verify_gaussianity(ens, index, sd, o.level);
  }
  throw UsageError("unknown suite '" + name +
                   "' (kernel, covariance, sandwich, gaussianity, ladder, all)");
}

int cmd_verify(const GlobalOpts& g, const VerifyOpts& o) {
  std::vector<std::string> suites;
  if (o.suite == "all")
    suites = {"kernel", "covariance", "sandwich", "gaussianity", "ladder"};
  else
    suites = {o.suite};

  VerifyContext ctx{g, o};
  bool all_pass = true;
  for (const std::string& name : suites) {
    const subfbm::SuiteResult result = run_one_suite(ctx, name);
    json meta;
    meta["seed"] = g.seed;
    if (ctx.ensemble) meta["ensemble"] = ensemble_meta(*ctx.ensemble);
    if (ctx.spec) meta["H"] = ctx.spec->H.value();
    const std::string path = resolve_out(g, "report-" + name + ".json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << result.to_json(meta.dump());
    out.close();

    int failed = 0;
    std::string failing;
    for (const auto& r : result.reports)
      if (!r.pass) {
        ++failed;
        failing += (failing.empty() ? "" : ",") + r.name;
      }
    std::cout << "suite=" << name << " pass=" << (result.pass ? "true" : "false")
              << " reports=" << result.reports.size() << " report=" << path;
    if (failed > 0) std::cout << " failing=" << failing;
    std::cout << "\n";
    all_pass = all_pass && result.pass;
  }
  return all_pass ? kExitOk : kExitVerifyFail;
}

// ---------------------------------------------------------------------------
// convergence

struct ConvergenceOpts {
  std::string experiment;
  SpecSource spec;
  std::vector<int> n_list;
  int m = 16;
  double t = -1.0;  // default depends on experiment
  int mc_paths = 20000;
  std::string output;
};

int cmd_convergence(const GlobalOpts& g, const ConvergenceOpts& o) {
  if (o.n_list.empty())
    throw UsageError("convergence requires a nonempty --n-list");
  for (int n : o.n_list)
    if (n < 2) throw UsageError("--n-list entries must be >= 2");

  const subfbm::KernelSpec spec = o.spec.load(g);
  std::vector<subfbm::ConvergenceRow> rows;
  double slope_target = 0.0;
  if (o.experiment == "d1") {
    const double t = o.t > 0.0 ? o.t : 0.37;
    rows = subfbm::ladder_d1_table(spec, t, o.n_list, o.mc_paths, g.seed);
    slope_target = -2.0 * spec.H.value();
  } else if (o.experiment == "d2") {
    const double t = o.t > 0.0 ? o.t : 1.0;
    if (o.m < 1) throw UsageError("--m must be >= 1");
    rows = subfbm::ladder_d2_table(spec, t, o.m, o.n_list, o.mc_paths, g.seed);
  } else if (o.experiment == "d3") {
    if (o.m < 1) throw UsageError("--m must be >= 1");
    rows = subfbm::ladder_d3_table(spec, o.m, o.n_list, o.mc_paths, g.seed);
    slope_target = -1.0;
  } else {
    throw UsageError("unknown experiment '" + o.experiment + "' (d1, d2, d3)");
  }

  const std::string default_name = "convergence-" + o.experiment + ".csv";
  const std::string path =
      resolve_out(g, o.output.empty() ? default_name : o.output);
  subfbm::save_convergence_csv(path, rows);

  std::cout << "experiment=" << o.experiment << " rows=" << rows.size()
            << " out=" << path << "\n";
  for (const auto& row : rows)
    std::cout << "  n=" << row.resolution << " mc=" << fmt_double(row.mc_estimate)
              << " se=" << fmt_double(row.mc_se)
              << " exact=" << fmt_double(row.exact_value)
              << " bound=" << fmt_double(row.bound) << "\n";

  bool fit_ok = rows.size() >= 2;
  for (const auto& row : rows)
    if (!(row.mc_estimate > 0.0)) fit_ok = false;
  if (fit_ok) {
    std::vector<double> xs, ys;
    for (const auto& row : rows) {
      xs.push_back(static_cast<double>(row.resolution));
      ys.push_back(row.mc_estimate);
    }
    const subfbm::RateFit fit = subfbm::fit_rate(xs, ys);
    std::cout << "slope=" << fmt_double(fit.slope)
              << " slope_se=" << fmt_double(fit.slope_se);
    if (slope_target != 0.0) std::cout << " target=" << fmt_double(slope_target);
    std::cout << "\n";
  } else {
    std::cout << "slope=degenerate (need >= 2 resolutions with positive "
                 "estimates)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// matrix build / inspect

struct MatrixBuildOpts {
  SpecSource spec;
  std::string scheme = "sub-floor";
  int n = 0;
  int m = 0;
};

int cmd_matrix_build(const GlobalOpts& g, const MatrixBuildOpts& o) {
  const subfbm::Scheme scheme = subfbm::scheme_from_name(o.scheme);
  if (scheme == subfbm::Scheme::Donsker || scheme == subfbm::Scheme::SubExact)
    throw UsageError("matrix build supports sub-floor, sub-step, sub-wiener, "
                     "and fbm");
  int n = o.n, m = o.m;
  if (scheme == subfbm::Scheme::SubWiener) {
    if (m < 1 && n >= 1) m = n;
    if (m < 1) throw UsageError("sub-wiener requires --m >= 1");
    n = m;
  } else if (scheme == subfbm::Scheme::SubStep) {
    if (n < 1 || m < 1)
      throw UsageError("sub-step requires --n and --m, both >= 1");
  } else {
    if (n < 1) throw UsageError("matrix build requires --n >= 1");
    m = 0;
  }
  const subfbm::KernelSpec spec =
      o.spec.load(g, scheme == subfbm::Scheme::Fbm);
  bool cache_hit = false;
  const auto t0 = std::chrono::steady_clock::now();
  const subfbm::KernelMatrix matrix = obtain(g, scheme, n, m, spec, &cache_hit);
  const auto t1 = std::chrono::steady_clock::now();
  const std::string dir = cache_directory(g);
  char checksum[24];
  std::snprintf(checksum, sizeof(checksum), "%016llx",
                static_cast<unsigned long long>(matrix.checksum()));
  std::cout << "matrix scheme=" << subfbm::scheme_name(scheme) << " n=" << n;
  if (m > 0) std::cout << " m=" << m;
  std::cout << " rows=" << matrix.rows() << " weights=" << matrix.weights.size()
            << " checksum=" << checksum << " wall="
            << fmt_seconds(std::chrono::duration<double>(t1 - t0).count())
            << "s cache=" << (cache_hit ? "hit" : "miss");
  if (!dir.empty())
    std::cout << " file="
              << (fs::path(dir) /
                  subfbm::matrix_cache_filename(scheme, n, m, spec))
                     .string();
  std::cout << "\n";
  return kExitOk;
}

int cmd_matrix_inspect(const std::string& file) {
  if (!fs::exists(file)) throw UsageError("matrix file not found: " + file);
  const subfbm::KernelMatrix matrix = subfbm::load_matrix(file);
  json j;
  j["scheme"] = subfbm::scheme_name(matrix.scheme);
  j["n"] = matrix.n;
  j["m"] = matrix.m;
  j["H"] = matrix.H;
  j["prefactor"] = matrix.prefactor;
  j["abs_tol"] = matrix.quad.abs_tol;
  j["rel_tol"] = matrix.quad.rel_tol;
  j["rows"] = matrix.rows();
  j["weights"] = matrix.weights.size();
  char checksum[24];
  std::snprintf(checksum, sizeof(checksum), "%016llx",
                static_cast<unsigned long long>(matrix.checksum()));
  j["checksum"] = checksum;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sfbm: simulate subfractional Brownian motion from correlated random "
      "walks and verify the construction against its analytic law"};
  app.require_subcommand(1);
  // Let global flags appear after the subcommand (sfbm simulate --out dir ...).
  app.fallthrough();

  GlobalOpts g;
  ConfigBinder global_binder;
  app.add_option("--config", g.config_path,
                 "JSON config file; explicit flags override its fields");
  global_binder.bind("seed", app.add_option("--seed", g.seed, "Master RNG seed"),
                     g.seed);
  global_binder.bind(
      "workers",
      app.add_option("--workers", g.workers, "Worker threads (0 = auto)"),
      g.workers);
  global_binder.bind("out",
                     app.add_option("--out", g.out, "Output directory"), g.out);
  global_binder.bind("no-cache",
                     app.add_flag("--no-cache", g.no_cache,
                                  "Do not read or write the matrix cache"),
                     g.no_cache);
  global_binder.bind("json-logs",
                     app.add_flag("--json-logs", g.json_logs,
                                  "Emit log lines as JSON objects on stderr"),
                     g.json_logs);

  std::map<const CLI::App*, ConfigBinder> binders;

  // calibrate
  CalibrateOpts cal;
  CLI::App* c_cal = app.add_subcommand(
      "calibrate", "Calibrate kernel constants for a Hurst index and save the "
                   "spec as JSON");
  {
    ConfigBinder& b = binders[c_cal];
    b.bind("hurst",
           c_cal->add_option("--hurst", cal.hurst, "Hurst index in (1/2, 1)"),
           cal.hurst);
    b.bind("abs-tol",
           c_cal->add_option("--abs-tol", cal.abs_tol,
                             "Quadrature absolute tolerance"),
           cal.abs_tol);
    b.bind("rel-tol",
           c_cal->add_option("--rel-tol", cal.rel_tol,
                             "Quadrature relative tolerance"),
           cal.rel_tol);
    b.bind("self-check-tol",
           c_cal->add_option("--self-check-tol", cal.self_check_tol,
                             "Max relative variance residual accepted over the "
                             "t-grid self check"),
           cal.self_check_tol);
    b.bind("output",
           c_cal->add_option("--output", cal.output,
                             "Spec file name (inside --out)"),
           cal.output);
  }

  // simulate
  SimulateOpts sim;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Generate a path ensemble and write it as CSV plus a JSON "
                  "metadata sidecar");
  {
    ConfigBinder& b = binders[c_sim];
    sim.spec.add_flags(c_sim, b, /*with_tols=*/true);
    b.bind("scheme",
           c_sim->add_option("--scheme", sim.scheme,
                             "donsker | sub-floor | sub-step | sub-wiener | fbm"),
           sim.scheme);
    b.bind("n", c_sim->add_option("--n", sim.n, "Walk resolution"), sim.n);
    b.bind("m",
           c_sim->add_option("--m", sim.m,
                             "Partition resolution (sub-step, sub-wiener)"),
           sim.m);
    b.bind("paths", c_sim->add_option("--paths", sim.paths, "Number of paths"),
           sim.paths);
    b.bind("distribution",
           c_sim->add_option("--distribution", sim.distribution,
                             "rademacher | gaussian"),
           sim.distribution);
    b.bind("output",
           c_sim->add_option("--output", sim.output,
                             "Ensemble CSV name (inside --out)"),
           sim.output);
  }

  // verify
  VerifyOpts ver;
  CLI::App* c_ver = app.add_subcommand(
      "verify", "Run a verification suite and write its report JSON; exits 1 "
                "if any check fails");
  {
    ConfigBinder& b = binders[c_ver];
    b.bind("suite",
           c_ver->add_option("--suite", ver.suite,
                             "kernel | covariance | sandwich | gaussianity | "
                             "ladder | all")
               ->required(),
           ver.suite);
    ver.spec.add_flags(c_ver, b);
    b.bind("in",
           c_ver->add_option("--in", ver.input,
                             "Existing ensemble CSV (otherwise one is "
                             "generated from --scheme/--n/--paths)"),
           ver.input);
    b.bind("scheme",
           c_ver->add_option("--scheme", ver.scheme,
                             "Scheme for a generated ensemble"),
           ver.scheme);
    b.bind("n", c_ver->add_option("--n", ver.n, "Walk resolution"), ver.n);
    b.bind("m", c_ver->add_option("--m", ver.m, "Partition resolution"), ver.m);
    b.bind("paths",
           c_ver->add_option("--paths", ver.paths,
                             "Paths for a generated ensemble"),
           ver.paths);
    b.bind("distribution",
           c_ver->add_option("--distribution", ver.distribution,
                             "rademacher | gaussian"),
           ver.distribution);
    b.bind("index",
           c_ver->add_option("--index", ver.index,
                             "Grid index for the gaussianity test (default: "
                             "last)"),
           ver.index);
    b.bind("mc-paths",
           c_ver->add_option("--mc-paths", ver.mc_paths,
                             "Monte Carlo paths per ladder experiment"),
           ver.mc_paths);
    b.bind("z-threshold",
           c_ver->add_option("--z-threshold", ver.z_threshold,
                             "Standard-error multiple for moment checks"),
           ver.z_threshold);
    b.bind("level",
           c_ver->add_option("--level", ver.level,
                             "KS significance level for gaussianity"),
           ver.level);
  }

  // convergence
  ConvergenceOpts conv;
  CLI::App* c_conv = app.add_subcommand(
      "convergence", "Run a discretization-error experiment over an n-list "
                     "and write the error table as CSV");
  {
    ConfigBinder& b = binders[c_conv];
    b.bind("experiment",
           c_conv->add_option("--experiment", conv.experiment, "d1 | d2 | d3")
               ->required(),
           conv.experiment);
    conv.spec.add_flags(c_conv, b);
    b.bind("n-list",
           c_conv->add_option("--n-list", conv.n_list,
                              "Walk resolutions (comma separated)")
               ->delimiter(','),
           conv.n_list);
    b.bind("m",
           c_conv->add_option("--m", conv.m,
                              "Partition resolution (d2, d3; default 16)"),
           conv.m);
    b.bind("t",
           c_conv->add_option("--t", conv.t,
                              "Evaluation time (d1 default 0.37, d2 default "
                              "1.0)"),
           conv.t);
    b.bind("mc-paths",
           c_conv->add_option("--mc-paths", conv.mc_paths,
                              "Monte Carlo paths per resolution"),
           conv.mc_paths);
    b.bind("output",
           c_conv->add_option("--output", conv.output,
                              "CSV name (inside --out)"),
           conv.output);
  }

  // matrix
  MatrixBuildOpts mb;
  std::string inspect_file;
  CLI::App* c_mat = app.add_subcommand(
      "matrix", "Build weight matrices into the cache, or inspect a cache "
                "file's header");
  c_mat->require_subcommand(1);
  c_mat->fallthrough();
  CLI::App* c_mat_build =
      c_mat->add_subcommand("build", "Build (or load) a matrix and report its "
                                     "checksum and cache status");
  {
    ConfigBinder& b = binders[c_mat_build];
    mb.spec.add_flags(c_mat_build, b);
    b.bind("scheme",
           c_mat_build->add_option("--scheme", mb.scheme,
                                   "sub-floor | sub-step | sub-wiener | fbm"),
           mb.scheme);
    b.bind("n", c_mat_build->add_option("--n", mb.n, "Walk resolution"), mb.n);
    b.bind("m",
           c_mat_build->add_option("--m", mb.m,
                                   "Partition resolution (sub-step, "
                                   "sub-wiener)"),
           mb.m);
  }
  CLI::App* c_mat_inspect =
      c_mat->add_subcommand("inspect", "Print a matrix cache file's header as "
                                       "JSON");
  {
    ConfigBinder& b = binders[c_mat_inspect];
    b.bind("file",
           c_mat_inspect
               ->add_option("--file", inspect_file, "Matrix cache file")
               ->required(),
           inspect_file);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::vector<const ConfigBinder*> chain{&global_binder};
    for (const CLI::App* sub = &app; !sub->get_subcommands().empty();) {
      sub = sub->get_subcommands().front();
      auto it = binders.find(sub);
      if (it != binders.end()) chain.push_back(&it->second);
    }
    apply_config(g.config_path, chain);

    if (c_cal->parsed()) return cmd_calibrate(g, cal);
    if (c_sim->parsed()) return cmd_simulate(g, sim);
    if (c_ver->parsed()) return cmd_verify(g, ver);
    if (c_conv->parsed()) return cmd_convergence(g, conv);
    if (c_mat->parsed()) {
      if (c_mat_build->parsed()) return cmd_matrix_build(g, mb);
      if (c_mat_inspect->parsed()) return cmd_matrix_inspect(inspect_file);
    }
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const subfbm::QuadratureError& e) {
    std::cerr << "quadrature error: " << e.what()
              << " (best estimate " << e.best_estimate() << ", error bound "
              << e.error_bound() << ")\n";
    return kExitNumeric;
  } catch (const subfbm::CalibrationError& e) {
    std::cerr << "calibration error: " << e.what() << "\n";
    for (const auto& [t, resid] : e.residuals())
      std::cerr << "  t=" << t << " relative residual=" << resid << "\n";
    return kExitNumeric;
  } catch (const subfbm::CacheError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
