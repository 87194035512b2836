#include "subfbm/kernel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace subfbm {

namespace {

void check_inner_domain(double s, double t) {
  if (!(s > 0.0)) throw std::invalid_argument("inner integral requires s > 0");
  if (!(t <= 1.0) || !(t > 0.0)) {
    throw std::invalid_argument("inner integral requires t in (0, 1]");
  }
  if (s > t) throw std::invalid_argument("inner integral requires s <= t");
}

// Shared shape of both inner integrals after the singularity-removing
// substitution x = s + y^(1/beta), beta = H - 1/2: a smooth integrand on
// [0, (t-s)^beta] with a boundary layer of width ~ (layer_scale * s)^beta.
template <class G>
double integrate_substituted(G&& g, double s, double t, double beta,
                             double layer_scale, const QuadratureConfig& cfg) {
  const double upper = std::pow(t - s, beta);
  const double layer = std::pow(layer_scale * s, beta);
  const double cut = std::min(0.5 * upper, layer);
  const double breakpoints[] = {cut};
  return integrate_adaptive(g, 0.0, upper, cfg, breakpoints).value;
}

// Integral over [0, b] of f with f ~ u^q at the left edge and a Holder edge
// (bounded value, unbounded derivative) at the right edge: power substitution
// on [0, b/2], geometrically graded panels toward b on [b/2, b].
template <class F>
double integrate_edge_aware(F&& f, double b, double q,
                            const QuadratureConfig& cfg) {
  if (b <= 0.0) return 0.0;
  const double mid = 0.5 * b;
  const double left = integrate_left_power(f, mid, q, cfg).value;
  std::vector<double> cuts;
  for (int j = 1; j <= 12; ++j) {
    cuts.push_back(b - mid * std::pow(0.5, j));
  }
  const double right = integrate_adaptive(f, mid, b, cfg, cuts).value;
  return left + right;
}

double sub_variance_target(double H) { return 2.0 - std::exp2(2.0 * H - 1.0); }

// Grid self-check shared by both calibrations: the continuum kernel scales as
// K(lambda t, lambda s) = lambda^(H-1/2) K(t, s), so Var(t) = Var(1) t^(2H)
// exactly; grid residuals measure quadrature error only.
template <class VarFn>
void run_scaling_check(VarFn&& variance_at, double var_coeff, double H,
                       double tol, const char* label) {
  std::vector<std::pair<double, double>> residuals;
  bool failed = false;
  for (int i = 1; i <= 10; ++i) {
    const double t = i / 10.0;
    const double scale = std::pow(t, 2.0 * H);
    const double target = var_coeff * scale;
    const double residual = std::abs(variance_at(t) - target) / scale;
    residuals.emplace_back(t, residual);
    failed = failed || !(residual < tol);
  }
  if (failed) {
    std::ostringstream msg;
    msg << label << " calibration scaling check failed (tol " << tol << "):";
    for (const auto& [t, r] : residuals) {
      if (!(r < tol)) msg << " t=" << t << " residual=" << r;
    }
    throw CalibrationError(msg.str(), std::move(residuals));
  }
}

}  // namespace

double inner_integral(double s, double t, const KernelSpec& spec) {
  if (s == t && s > 0.0) return 0.0;
  check_inner_domain(s, t);
  const double H = spec.H.value();
  const double alpha = H - 1.5;
  const double beta = H - 0.5;
  const double inv_beta = 1.0 / beta;
  const double two_s = 2.0 * s;
  auto g = [=](double y) {
    return std::pow(std::pow(y, inv_beta) + two_s, alpha) * inv_beta;
  };
  return integrate_substituted(g, s, t, beta, 4.0, spec.quad);
}

double inner_integral_fbm(double s, double t, const KernelSpec& spec) {
  if (s == t && s > 0.0) return 0.0;
  check_inner_domain(s, t);
  const double H = spec.H.value();
  const double beta = H - 0.5;
  const double inv_beta = 1.0 / beta;
  auto g = [=](double y) {
    return std::pow(s + std::pow(y, inv_beta), beta) * inv_beta;
  };
  return integrate_substituted(g, s, t, beta, 2.0, spec.quad);
}

double k_sub(double t, double s, const KernelSpec& spec) {
  if (!(t >= 0.0) || !(t <= 1.0) || !(s >= 0.0) || !(s <= 1.0)) {
    throw std::invalid_argument("k_sub requires t, s in [0, 1]");
  }
  if (s >= t || s <= 0.0) return 0.0;
  const double H = spec.H.value();
  return spec.c_sub * std::pow(s, 1.5 - H) * inner_integral(s, t, spec);
}

double k_fbm(double t, double s, const KernelSpec& spec) {
  if (!(t >= 0.0) || !(t <= 1.0) || !(s >= 0.0) || !(s <= 1.0)) {
    throw std::invalid_argument("k_fbm requires t, s in [0, 1]");
  }
  if (s >= t || s <= 0.0) return 0.0;
  const double H = spec.H.value();
  return spec.c_fbm * std::pow(s, 0.5 - H) * inner_integral_fbm(s, t, spec);
}

double kernel_variance_sub(double t, const KernelSpec& spec) {
  if (t <= 0.0) return 0.0;
  KernelSpec inner_spec = spec;
  inner_spec.quad = spec.quad.inner();
  const double H = spec.H.value();
  auto f = [&](double u) {
    const double k = k_sub(t, u, inner_spec);
    return k * k;
  };
  // k_sub^2 ~ u^(2H-1) at the left edge.
  return integrate_edge_aware(f, t, 2.0 * H - 1.0, spec.quad);
}

double kernel_variance_fbm(double t, const KernelSpec& spec) {
  if (t <= 0.0) return 0.0;
  KernelSpec inner_spec = spec;
  inner_spec.quad = spec.quad.inner();
  const double H = spec.H.value();
  auto f = [&](double u) {
    const double k = k_fbm(t, u, inner_spec);
    return k * k;
  };
  // k_fbm^2 ~ u^(1-2H) at the left edge: an integrable singularity.
  return integrate_edge_aware(f, t, 1.0 - 2.0 * H, spec.quad);
}

double kernel_covariance_sub(double s, double t, const KernelSpec& spec) {
  const double m = std::min(s, t);
  if (m <= 0.0) return 0.0;
  KernelSpec inner_spec = spec;
  inner_spec.quad = spec.quad.inner();
  const double H = spec.H.value();
  auto f = [&](double u) {
    return k_sub(t, u, inner_spec) * k_sub(s, u, inner_spec);
  };
  return integrate_edge_aware(f, m, 2.0 * H - 1.0, spec.quad);
}

KernelSpec calibrate_sub(const HurstIndex& H, const QuadratureConfig& quad,
                         double self_check_tol) {
  KernelSpec spec{H, 0.0, 0.0, quad};
  spec.quad.singularity_exponent = H.singularity_exponent();

  KernelSpec inner_spec = spec;
  inner_spec.quad = spec.quad.inner();
  const double h = H.value();
  auto f = [&](double u) {
    const double v = std::pow(u, 1.5 - h) * inner_integral(u, 1.0, inner_spec);
    return v * v;
  };
  const double denom = integrate_edge_aware(f, 1.0, 2.0 * h - 1.0, spec.quad);
  const double target = sub_variance_target(h);
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw CalibrationError("subfractional calibration integral is not positive", {});
  }
  spec.c_sub = std::sqrt(target / denom);

  run_scaling_check([&](double t) { return kernel_variance_sub(t, spec); },
                    target, h, self_check_tol, "subfractional");
  return spec;
}

void calibrate_fbm(KernelSpec& spec, double self_check_tol) {
  KernelSpec inner_spec = spec;
  inner_spec.quad = spec.quad.inner();
  const double h = spec.H.value();
  auto f = [&](double u) {
    const double v = std::pow(u, 0.5 - h) * inner_integral_fbm(u, 1.0, inner_spec);
    return v * v;
  };
  const double denom = integrate_edge_aware(f, 1.0, 1.0 - 2.0 * h, spec.quad);
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw CalibrationError("fractional calibration integral is not positive", {});
  }
  spec.c_fbm = 1.0 / std::sqrt(denom);

  run_scaling_check([&](double t) { return kernel_variance_fbm(t, spec); },
                    1.0, h, self_check_tol, "fractional");
}

KernelSpec calibrate(const HurstIndex& H, const QuadratureConfig& quad,
                     double self_check_tol) {
  KernelSpec spec = calibrate_sub(H, quad, self_check_tol);
  calibrate_fbm(spec, self_check_tol);
  return spec;
}

std::string spec_to_json(const KernelSpec& spec) {
  nlohmann::json j;
  j["H"] = spec.H.value();
  j["c_sub"] = spec.c_sub;
  j["c_fbm"] = spec.c_fbm;
  j["quad"] = {
      {"abs_tol", spec.quad.abs_tol},
      {"rel_tol", spec.quad.rel_tol},
      {"max_subdivisions", spec.quad.max_subdivisions},
  };
  return j.dump(2) + "\n";
}

KernelSpec spec_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  HurstIndex H(j.at("H").get<double>());
  QuadratureConfig quad;
  quad.abs_tol = j.at("quad").at("abs_tol").get<double>();
  quad.rel_tol = j.at("quad").at("rel_tol").get<double>();
  quad.max_subdivisions = j.at("quad").at("max_subdivisions").get<int>();
  quad.singularity_exponent = H.singularity_exponent();
  KernelSpec spec{H, j.at("c_sub").get<double>(), j.at("c_fbm").get<double>(), quad};
  return spec;
}

void save_spec(const std::string& path, const KernelSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open spec file for writing: " + path);
  out << spec_to_json(spec);
  if (!out) throw std::runtime_error("failed writing spec file: " + path);
}

KernelSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return spec_from_json(buf.str());
}

}  // namespace subfbm
