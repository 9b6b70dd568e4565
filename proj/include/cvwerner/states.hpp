#pragma once

#include <cmath>

#include "cvwerner/fock.hpp"

namespace cvw {

inline constexpr double kDefaultTailBound = 1e-10;
inline constexpr int kMinCutoff = 4;
inline constexpr int kMaxCutoff = 64;

/// Mixing probability p, squeezing r and thermal-noise parameter s.
struct WernerParams {
  double p = 0;
  double r = 0;
  double s = 0;

  /// Validating constructor; throws ParametersOutOfRange naming the bound.
  static WernerParams make(double p, double r, double s);
  /// The direct analogue of the discrete Werner state: s = r.
  static WernerParams symmetric(double p, double r) { return make(p, r, r); }

  double lambda1() const { return std::tanh(r); }
  double lambda2() const { return std::tanh(s); }
  double mean_thermal_photons() const { return std::sinh(s) * std::sinh(s); }
};

/// Two-mode squeezed vacuum (1 - l^2) sum_{m,n} l^{m+n} |m,m><n,n|, l = tanh r.
TwoModeDensityMatrix nopa_state(double r, const FockCutoff& cutoff);

/// Product of two thermal states with l = tanh s.
TwoModeDensityMatrix thermal_product_state(double s, const FockCutoff& cutoff);

/// p * nopa(r) + (1 - p) * thermal(s), entrywise.
TwoModeDensityMatrix werner_state(const WernerParams& params, const FockCutoff& cutoff);

/// Single-mode thermal density matrix diag((1 - l^2) l^{2m}).
MatrixXc thermal_single_mode(double s, int n_max);

/// Trace mass lost by truncating each constituent at n_max.
double nopa_tail(double r, int n_max);
double thermal_tail(double s, int n_max);

/// Minimal n_max with p * nopa_tail and (1 - p) * thermal_tail both <= tail_bound / 2,
/// clamped below at 4. Throws ParametersOutOfRange if more than 64 levels are needed.
FockCutoff select_cutoff(const WernerParams& params, double tail_bound = kDefaultTailBound);

/// select_cutoff, or n_max = 64 with the tail bound raised to the mass
/// actually lost when more levels would be needed. Used where strongly
/// squeezed points must still be evaluated on a dense matrix. When `even` is set the result is rounded up
/// to an even n_max (required by the two-qubit map).
FockCutoff select_cutoff_relaxed(const WernerParams& params, double tail_bound = kDefaultTailBound,
                                 bool even = false);

}  // namespace cvw
