#pragma once

// Entanglement, separability and squeezing of the Werner state evaluated
// directly in the two-mode Fock space.
//
// The partial transpose of rho_W splits into 1x1 blocks on |l,l> and 2x2
// blocks on {|m,n>, |n,m>}. A 2x2 block turns negative when
//   p (1 - l1^2) l1^k > (1 - p) (1 - l2^2)^2 l2^{2k},   k = m + n,
// so the per-order bound is governed by q = l1 / l2^2. The positivity of the
// separable cells (alpha >= beta) is governed by q~ = l1 / l2^4.

#include <optional>
#include <string>
#include <vector>

#include "cvwerner/fock.hpp"
#include "cvwerner/numerics.hpp"
#include "cvwerner/states.hpp"

namespace cvw {

inline constexpr int kOrderHorizon = 200;

struct PptSpectrum {
  double p = 0;
  double lambda1 = 0;
  double lambda2 = 0;
  double min_eigenvalue_estimate = 0;  // min of pair_minus over 1 <= m + n <= 2 n_max

  double diag(int l) const;
  double pair_plus(int m, int n) const;
  double pair_minus(int m, int n) const;

  /// Every eigenvalue whose indices fall inside [0, n_max)^2, ascending. This
  /// is the exact spectrum of the partially transposed truncated state.
  std::vector<double> enumerate(int n_max) const;
};

PptSpectrum ppt_spectrum_analytic(const WernerParams& params, int n_max);

/// Brute force: partial transpose of the matrix, then the Jacobi eigensolver.
EigenResult<double> ppt_spectrum_numeric(const TwoModeDensityMatrix& rho);

enum class Regime { kAnyPositiveP, kConstant, kFirstOrder };

std::string to_string(Regime regime);

struct DirectThreshold {
  double p = 0;
  Regime regime = Regime::kFirstOrder;
  double ratio = 0;  // l1 / l2^2, +inf when l2 = 0
};

/// p_k: the 2x2 block of order k = m + n is negative iff p > p_k.
double ppt_order_bound(double r, double s, int k);

/// inf_{k >= 1} p_k by direct minimisation over k <= horizon plus the k -> inf limit.
DirectThreshold direct_entanglement_threshold(double r, double s, int horizon = kOrderHorizon);

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// p-range where rho_W has a negative partial transpose but its two-qubit
/// image does not: [direct, mapped] when direct < mapped.
std::optional<Interval> mapped_vs_direct_gap(double r, double s);

/// Decomposition into diagonal weights on |mm> and 4x4 cells on
/// {|mm>, |mn>, |nm>, |nn>}: rho^mn = (1/2)[[a,0,0,b],[0,g,0,0],[0,0,g,0],[b,0,0,a]].
struct SeparabilityCells {
  double p = 0;
  double lambda1 = 0;
  double lambda2 = 0;

  /// Weight of |mm><mm| in the infinite space.
  double diag_weight(int m) const;
  /// Weight of |mm><mm| on the truncated space [0, n_max): the infinite-space
  /// weight plus the cells with n >= n_max that truncation removes.
  double diag_weight(int m, int n_max) const;
  double alpha(int m, int n) const;
  double beta(int m, int n) const;
  double gamma(int m, int n) const;

  /// Reassemble rho_W on [0, n_max)^2 from the weights and cells.
  MatrixXc reconstruct(int n_max) const;
};

SeparabilityCells separability_cells(const WernerParams& params);

/// alpha_k >= beta_k  <=>  p <= this bound.
double positivity_order_bound(double r, double s, int k);

struct SeparableBound {
  double p_max = 0;
  Regime regime = Regime::kFirstOrder;  // classified by q~ = l1 / l2^4
  double ratio = 0;
};

/// Largest p for which every cell is positive and separable.
SeparableBound largest_separable_p(double r, double s, int horizon = kOrderHorizon);

enum class Criterion { kEntangledPptDirect, kEntangledPptMapped, kSeparableSufficient, kNonlocal, kSqueezed };
enum class Method { kAnalytic, kBruteForce, kBoth };

std::string to_string(Criterion c);
std::string to_string(Method m);

struct CriterionVerdict {
  Criterion criterion{};
  bool decision = false;
  std::optional<double> threshold_p;
  double margin = 0;  // signed distance from the decision boundary
  Method method = Method::kAnalytic;
};

/// Sufficient separability test on the cell decomposition.
CriterionVerdict separability_sufficient(const WernerParams& params);

/// Direct PPT entanglement test, analytic threshold cross-checked against
/// the brute-force spectrum of `rho` when given.
CriterionVerdict entangled_ppt_direct(const WernerParams& params, const TwoModeDensityMatrix* rho = nullptr);

/// PPT test on the two-qubit image: closed-form 4x4 against the truncated map
/// of `rho` when given.
CriterionVerdict entangled_ppt_mapped(const WernerParams& params, const TwoModeDensityMatrix* rho = nullptr);

/// CHSH violation of the two-qubit image.
CriterionVerdict nonlocal(const WernerParams& params, const TwoModeDensityMatrix* rho = nullptr);

// Squeezing of x_A - x_B with x = (a + a^dagger)/sqrt 2 (vacuum variance 1).

/// Brute-force Var(x_A - x_B) on the truncated matrix.
double quadrature_difference_variance(const TwoModeDensityMatrix& rho);

/// p e^{-2r} + (1 - p) cosh 2s: both components have zero mean, so the
/// mixture's second moment is the weighted sum.
double mixture_variance(const WernerParams& params);

/// p above which mixture_variance < 1. Returns 1 when r = 0.
double squeezing_threshold(double r, double s);

/// The r = s threshold in two closed forms: the l1 form and the
/// (r, <n>_T) form, here evaluated with <n>_T = sinh^2 s.
double squeezing_threshold_lambda_form(double r);
double squeezing_threshold_photon_form(double r, double s);

/// Admissible |truncated - closed-form| variance gap: 1e-6 plus the variance
/// the lost tail mass can carry.
double squeezing_allowance(const WernerParams& params, const TwoModeDensityMatrix& rho);

struct SqueezingReport {
  double variance_matrix = 0;
  double variance_closed_form = 0;
  double threshold = 0;
  std::optional<double> threshold_photon_form;  // r = s only
  CriterionVerdict verdict;
};

/// Both routes; throws ConsistencyError when the truncated variance strays
/// from the closed form by more than 1e-6 plus the truncation allowance.
SqueezingReport squeezing_criterion(const WernerParams& params, const TwoModeDensityMatrix& rho);

}  // namespace cvw
