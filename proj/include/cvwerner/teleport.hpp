#pragma once

// Coherent-state teleportation fidelity with the Werner state as the shared
// resource: the closed forms for r = s and a phase-space convolution oracle.
//
// Conventions: x = (a + a^dagger)/sqrt 2, vacuum W = exp(-x^2 - p^2)/pi.
// Channel Wigner functions are written in the rotated variables
// x_± = x_A ± x_B, p_± = p_A ± p_B as W(x_-, x_+, p_-, p_+), which equals the
// ordinary W_AB(x_A, p_A, x_B, p_B) at the corresponding point.

#include <optional>

#include "cvwerner/core.hpp"
#include "cvwerner/numerics.hpp"
#include "cvwerner/states.hpp"

namespace cvw {

/// 1 / (1 + e^{-2r}).
double fidelity_nopa(double r);

/// d = 2 cosh^2 r, so the thermal channel at s = r teleports with fidelity 1/d.
double effective_dimension(double r);

struct FidelityReport {
  double fidelity_closed_form = 0;
  std::optional<double> fidelity_numeric;
  double d_eff = 0;
  double method_agreement = 0;  // |closed form - numeric|, 0 without numeric
};

/// p F_NOPA(r) + (1 - p)/d at r = s.
FidelityReport fidelity_werner(double p, double r);

/// Closed form plus the numeric oracle at the given input amplitude. Requires r = s.
FidelityReport fidelity_werner_checked(const WernerParams& params, Complex alpha = {0, 0});

/// p above which F_W > 1/2 at fixed r = s; 1 when never.
double useful_teleportation_threshold(double r);

enum class ChannelComponent { kNopa, kThermal };

/// Gaussian Wigner function of one channel component in rotated variables.
/// `squeeze` is r for the NOPA state and s for the thermal state.
double component_wigner(ChannelComponent c, double squeeze, double xm, double xp, double pm, double pp);

/// Wigner function of rho_W at (x_A, p_A, x_B, p_B).
double werner_wigner(const WernerParams& params, double xa, double pa, double xb, double pb);

/// W_AB sampled on a coarse 4D grid, axes ordered (x_A, p_A, x_B, p_B).
struct WignerGridState {
  PhaseSpaceGrid grid;

  double normalization() const { return integrate_grid(grid); }
};

WignerGridState wigner_grid_state(const WernerParams& params, int points_per_axis = 61);

/// K(x_-, p_+) = ∫ dx_+ dp_- W(-x_-, x_+, p_-, p_+) for one component, by
/// direct 2D quadrature.
double teleport_kernel(ChannelComponent c, double squeeze, double xm, double pp);

/// Fidelity of one channel component for coherent input alpha:
///   W_out(x, p) = (1/4) ∫ K(x - x', p - p') W_in(x', p') dx' dp',
///   F = 2 pi ∫ W_in W_out.
/// The kernel is Gaussian and factorises in (x_-, p_+), so it is built from
/// one 2D integral over (x_+, p_-) and the remaining integrals split into two
/// 2D quadratures over (x, x') and (p, p').
double component_fidelity_numeric(ChannelComponent c, double squeeze, Complex alpha);

/// Linear in the channel: p F[NOPA(r)] + (1 - p) F[thermal(s)]. Any (r, s).
double fidelity_numeric_oracle(const WernerParams& params, Complex alpha = {0, 0});

}  // namespace cvw
