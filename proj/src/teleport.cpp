#include "cvwerner/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cvw {

namespace {

constexpr double kPi = std::numbers::pi;

// Standard deviation of the widest direction of a component's Wigner function
// in rotated variables.
double wide_sigma(ChannelComponent c, double squeeze) {
  return c == ChannelComponent::kNopa ? std::exp(squeeze) : std::sqrt(std::cosh(2 * squeeze));
}

// Standard deviation of the kernel along x_- (and p_+).
double kernel_sigma(ChannelComponent c, double squeeze) {
  return c == ChannelComponent::kNopa ? std::exp(-squeeze) : std::sqrt(std::cosh(2 * squeeze));
}

double kernel_half_width(double squeeze) { return 6.0 + 7.0 * std::exp(squeeze); }

// ∫∫ w(u2) g(u2 - u1) w(u1) du1 du2 with w(u) = exp(-(u - u0)^2)/sqrt(pi).
double input_convolution(const std::function<double(double)>& g, double u0, double g_sigma) {
  const double hw = 8.0 + std::abs(u0);
  const int n = odd_points_for_spacing(hw, std::min(g_sigma, 1.0 / std::sqrt(2.0)) / 2.0);
  const double norm = 1.0 / kPi;
  const auto grid = sample_grid(
      [&](double u1, double u2) {
        return norm * std::exp(-(u1 - u0) * (u1 - u0) - (u2 - u0) * (u2 - u0)) * g(u2 - u1);
      },
      hw, n);
  return integrate_grid(grid);
}

}  // namespace

double fidelity_nopa(double r) {
  if (!(r >= 0)) throw ParametersOutOfRange("fidelity_nopa: r must be >= 0");
  return 1.0 / (1.0 + std::exp(-2 * r));
}

double effective_dimension(double r) {
  const double c = std::cosh(r);
  return 2 * c * c;
}

FidelityReport fidelity_werner(double p, double r) {
  WernerParams::make(p, r, r);
  FidelityReport out;
  out.d_eff = effective_dimension(r);
  out.fidelity_closed_form = p * fidelity_nopa(r) + (1 - p) / out.d_eff;
  return out;
}

FidelityReport fidelity_werner_checked(const WernerParams& params, Complex alpha) {
  if (params.r != params.s) throw ParametersOutOfRange("fidelity_werner_checked: the closed form needs r = s");
  auto out = fidelity_werner(params.p, params.r);
  out.fidelity_numeric = fidelity_numeric_oracle(params, alpha);
  out.method_agreement = std::abs(*out.fidelity_numeric - out.fidelity_closed_form);
  return out;
}

double useful_teleportation_threshold(double r) {
  const double inv_d = 1.0 / effective_dimension(r);
  const double f = fidelity_nopa(r);
  if (f <= 0.5) return 1.0;
  return (0.5 - inv_d) / (f - inv_d);
}

double component_wigner(ChannelComponent c, double squeeze, double xm, double xp, double pm, double pp) {
  if (c == ChannelComponent::kNopa) {
    const double e = std::exp(2 * squeeze);
    return std::exp(-0.5 * e * (xm * xm + pp * pp) - 0.5 / e * (xp * xp + pm * pm)) / (kPi * kPi);
  }
  const double ch = std::cosh(2 * squeeze);
  return std::exp(-(xp * xp + xm * xm + pp * pp + pm * pm) / (2 * ch)) / (kPi * kPi * ch * ch);
}

double werner_wigner(const WernerParams& params, double xa, double pa, double xb, double pb) {
  const double xm = xa - xb, xp = xa + xb, pm = pa - pb, pp = pa + pb;
  return params.p * component_wigner(ChannelComponent::kNopa, params.r, xm, xp, pm, pp) +
         (1 - params.p) * component_wigner(ChannelComponent::kThermal, params.s, xm, xp, pm, pp);
}

WignerGridState wigner_grid_state(const WernerParams& params, int points_per_axis) {
  // Widest single-quadrature spread of either component is cosh(2 max(r, s)) / 2.
  const double sigma = std::sqrt(std::cosh(2 * std::max(params.r, params.s)) / 2);
  const double hw = std::max(6.0, 6.5 * sigma);
  return WignerGridState{sample_grid(
      [&](double xa, double pa, double xb, double pb) { return werner_wigner(params, xa, pa, xb, pb); }, hw,
      points_per_axis)};
}

double teleport_kernel(ChannelComponent c, double squeeze, double xm, double pp) {
  const double hw = kernel_half_width(squeeze);
  const int n = odd_points_for_spacing(hw, wide_sigma(c, squeeze) / 2.0);
  const auto grid =
      sample_grid([&](double xp, double pm) { return component_wigner(c, squeeze, -xm, xp, pm, pp); }, hw, n);
  return integrate_grid(grid);
}

double component_fidelity_numeric(ChannelComponent c, double squeeze, Complex alpha) {
  if (!(squeeze >= 0)) throw ParametersOutOfRange("component_fidelity_numeric: squeezing must be >= 0");
  const double k0 = teleport_kernel(c, squeeze, 0.0, 0.0);
  const double peak = component_wigner(c, squeeze, 0, 0, 0, 0);
  // K(xi, eta) = k0 * gx(xi) * gp(eta), each normalised to 1 at the origin.
  const auto gx = [&](double xi) { return component_wigner(c, squeeze, -xi, 0, 0, 0) / peak; };
  const auto gp = [&](double eta) { return component_wigner(c, squeeze, 0, 0, 0, eta) / peak; };
  const double x0 = std::sqrt(2.0) * alpha.real();
  const double p0 = std::sqrt(2.0) * alpha.imag();
  const double sigma = kernel_sigma(c, squeeze);
  const double jx = input_convolution(gx, x0, sigma);
  const double jp = input_convolution(gp, p0, sigma);
  // 2 pi * (1/4) * k0 * jx * jp
  return 0.5 * kPi * k0 * jx * jp;
}

double fidelity_numeric_oracle(const WernerParams& params, Complex alpha) {
  double f = 0.0;
  if (params.p > 0) f += params.p * component_fidelity_numeric(ChannelComponent::kNopa, params.r, alpha);
  if (params.p < 1) f += (1 - params.p) * component_fidelity_numeric(ChannelComponent::kThermal, params.s, alpha);
  return f;
}

}  // namespace cvw
