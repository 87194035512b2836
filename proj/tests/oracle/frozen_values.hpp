#pragma once

// Reference values frozen ahead of implementation. Each constant was
// computed from the defining formula with an independent high-precision
// integrator (30-digit arithmetic, Gauss-Legendre / tanh-sinh rules) or, for
// the distribution-function values, with a separately maintained statistics
// package. Tests compare library output against these numbers; regenerate by
// evaluating the definitions directly, not by calling the library.

namespace frozen {

// Calibration constants c(H) making the kernel reproduce unit variance of
// the target process at t = 1.
inline constexpr double c_sub_060 = 0.20078966717192263;
inline constexpr double c_sub_075 = 0.44973016959688424;
inline constexpr double c_sub_090 = 0.49183223019447278;

inline constexpr double c_fbm_060 = 0.10760051841318069;
inline constexpr double c_fbm_075 = 0.26741115875799758;
// Closed form; direct quadrature agrees to ~4e-8 at this H.
inline constexpr double c_fbm_090 = 0.324488259257341;

// Inner integrals at H = 0.75.
inline constexpr double inner_sub_05_10 = 3.1582327778684018;   // s=0.5, t=1
inline constexpr double inner_fbm_05_10 = 2.9483351588850166;   // s=0.5, t=1
inline constexpr double inner_sub_limit_h1 = 1.3169578969248167; // ln(2+sqrt(3))

// Calibrated kernel point values at H = 0.75.
inline constexpr double k_sub_05_025 = 0.7101762814085976; // k(t=0.5, s=0.25)
inline constexpr double k_fbm_10_05 = 0.9375919636980572;  // k(t=1, s=0.5)
inline constexpr double int_k_sub_row1 = 0.7546555832008386; // ∫₀¹ k(1,u) du

// Covariance of the target process at H = 0.75.
inline constexpr double cov_03_07 = 0.12348767941866745;
inline constexpr double cov_05_10 = 0.25821804175294494;
inline constexpr double cov_01_09 = 0.027666868447179804;
inline constexpr double cov_08_09 = 0.445280923860103;

// Variance prefactor 2 - 2^(2H-1) at H = 0.75 and Var at t = 0.5.
inline constexpr double var_prefactor_075 = 0.5857864376269049;
inline constexpr double var_at_half_075 = 0.20710678118654752;

// L2 distance between the piecewise-constant kernel on m cells and the exact
// kernel, first row argument t = 1, H = 0.75.
inline constexpr double step_l2_m4 = 0.39626095305084186;
inline constexpr double step_l2_m16 = 0.1585884257300374;
inline constexpr double step_l2_m64 = 0.059619843951701286;
inline constexpr double step_l2_m256 = 0.021773458227875544;

// Squared weight-vector distance between the exact-time row at t = 0.37 and
// the floor row, H = 0.75.
inline constexpr double d1_t037_n64 = 1.887366e-04;
inline constexpr double d1_t037_n256 = 2.895770e-05;
inline constexpr double d1_t037_n1024 = 5.232364e-06;
inline constexpr double d1_t037_slope = -1.2932;

// Relative deficit of the discrete row variance sum A[n][i]^2 against the
// continuous variance, n = 256, k = n.
inline constexpr double row_var_deficit_h060_n256 = 3.022e-05;
inline constexpr double row_var_deficit_h075_n256 = 5.083e-05;
inline constexpr double row_var_deficit_h090_n256 = 5.115e-05;
inline constexpr double row_var_h075_n256 = 0.5857566600; // 10 digits

// Variance of the step-form discretization at t = 1, m = 256, H = 0.75
// (independent-increment form, sum k(1, t_i)^2 / m).
inline constexpr double wiener_var_m256 = 0.5855910166736629;

// Squared distance between block and overlap weight vectors, m = 16, t = 1,
// H = 0.75, at grids chosen so n is not a multiple of m.
inline constexpr double d3_m16_n72 = 1.85626773e-03;
inline constexpr double d3_m16_n264 = 5.06254836e-04;
inline constexpr double d3_m16_n1032 = 1.29507051e-04;
inline constexpr double d3_m16_n_times_d3 = 0.133651277;

// Kolmogorov limiting tail P(sup|B°| > x) values.
inline constexpr double kolm_040 = 0.9971923267772983;
inline constexpr double kolm_050 = 0.96394524366487511;
inline constexpr double kolm_100 = 0.26999967167735456;
inline constexpr double kolm_118 = 0.12345380942976571;
inline constexpr double kolm_136 = 0.049485876755377876;
inline constexpr double kolm_200 = 0.00067092525577969533;

// Standard normal CDF values.
inline constexpr double phi_196 = 0.97500210485177952;
inline constexpr double phi_m05 = 0.30853753872598688;

// Two-sample fixture: a = {0.1,0.35,0.62,0.81,0.93},
// b = {0.05,0.2,0.4,0.55,0.7,0.88}.
inline constexpr double ks2_fixture_d = 0.26666666666666666;
inline constexpr double ks2_fixture_neff = 2.7272727272727271;
inline constexpr double ks2_fixture_p = 0.969898922734308;

// One-sample fixture: standard normal quantiles at (i-0.5)/8, i=1..8.
inline constexpr double ks1_fixture_quantiles[8] = {
    -1.5341205443525463, -0.88714655901887596, -0.48877641111466952,
    -0.1573106846101707, 0.1573106846101707,  0.48877641111466952,
    0.88714655901887596,  1.5341205443525463};
inline constexpr double ks1_fixture_d = 0.0625;
inline constexpr double ks1_fixture_p = 0.99999999999999423;

}  // namespace frozen
