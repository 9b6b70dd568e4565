#include "cvwerner/criteria.hpp"

#include "cvwerner/qubit_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cvw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 / (1 + exp(log_ratio)) without overflow.
double logistic_bound(double log_ratio) {
  if (log_ratio > 700) return 0.0;
  if (log_ratio < -700) return 1.0;
  return 1.0 / (1.0 + std::exp(log_ratio));
}

bool near_one(double q) { return std::abs(q - 1.0) <= 1e-12; }

}  // namespace

// ---------------------------------------------------------------------------
// Partial-transpose spectrum

double PptSpectrum::diag(int l) const {
  const double a1 = 1 - lambda1 * lambda1, a2 = 1 - lambda2 * lambda2;
  return p * a1 * std::pow(lambda1, 2 * l) + (1 - p) * a2 * a2 * std::pow(lambda2, 4 * l);
}

double PptSpectrum::pair_plus(int m, int n) const {
  const double a1 = 1 - lambda1 * lambda1, a2 = 1 - lambda2 * lambda2;
  return (1 - p) * a2 * a2 * std::pow(lambda2, 2 * (m + n)) + p * a1 * std::pow(lambda1, m + n);
}

double PptSpectrum::pair_minus(int m, int n) const {
  const double a1 = 1 - lambda1 * lambda1, a2 = 1 - lambda2 * lambda2;
  return (1 - p) * a2 * a2 * std::pow(lambda2, 2 * (m + n)) - p * a1 * std::pow(lambda1, m + n);
}

std::vector<double> PptSpectrum::enumerate(int n_max) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max) * n_max);
  for (int l = 0; l < n_max; ++l) out.push_back(diag(l));
  for (int m = 0; m < n_max; ++m)
    for (int n = m + 1; n < n_max; ++n) {
      out.push_back(pair_plus(m, n));
      out.push_back(pair_minus(m, n));
    }
  std::sort(out.begin(), out.end());
  return out;
}

PptSpectrum ppt_spectrum_analytic(const WernerParams& params, int n_max) {
  PptSpectrum spec{params.p, params.lambda1(), params.lambda2(), kInf};
  // pair_minus depends on m + n only; order k is realised by (k, 0).
  for (int k = 1; k <= 2 * n_max; ++k) spec.min_eigenvalue_estimate = std::min(spec.min_eigenvalue_estimate, spec.pair_minus(k, 0));
  return spec;
}

EigenResult<double> ppt_spectrum_numeric(const TwoModeDensityMatrix& rho) {
  return hermitian_eigenvalues(partial_transpose_A(rho.data));
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kAnyPositiveP: return "any_positive_p";
    case Regime::kConstant: return "constant";
    case Regime::kFirstOrder: return "first_order";
  }
  return "?";
}

double ppt_order_bound(double r, double s, int k) {
  const double l1 = std::tanh(r), l2 = std::tanh(s);
  if (l1 == 0) return 1.0;
  if (l2 == 0) return 0.0;
  const double a2 = 1 - l2 * l2;
  // p_k = A / (A + B q^k), A = (1 - l2^2)^2, B = 1 - l1^2, q = l1 / l2^2
  const double log_ratio = std::log1p(-l1 * l1) - 2 * std::log(a2) + k * (std::log(l1) - 2 * std::log(l2));
  return logistic_bound(log_ratio);
}

DirectThreshold direct_entanglement_threshold(double r, double s, int horizon) {
  const double l1 = std::tanh(r), l2 = std::tanh(s);
  if (l1 == 0) return {1.0, Regime::kFirstOrder, 0.0};
  if (l2 == 0) return {0.0, Regime::kAnyPositiveP, kInf};
  const double q = l1 / (l2 * l2);
  DirectThreshold out;
  out.ratio = q;
  double best = 1.0;
  for (int k = 1; k <= horizon; ++k) best = std::min(best, ppt_order_bound(r, s, k));
  double limit;
  if (near_one(q)) {
    out.regime = Regime::kConstant;
    const double a2 = 1 - l2 * l2;
    limit = a2 * a2 / (a2 * a2 + (1 - l1 * l1));
  } else if (q > 1) {
    out.regime = Regime::kAnyPositiveP;
    limit = 0.0;
  } else {
    out.regime = Regime::kFirstOrder;
    limit = 1.0;
  }
  out.p = std::min(best, limit);
  return out;
}

std::optional<Interval> mapped_vs_direct_gap(double r, double s) {
  const double lo = direct_entanglement_threshold(r, s).p;
  const double hi = std::min(1.0, mapped_entanglement_threshold(r, s));
  if (lo < hi) return Interval{lo, hi};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Separable decomposition

double SeparabilityCells::diag_weight(int m) const {
  const double a1 = 1 - lambda1 * lambda1, a2 = 1 - lambda2 * lambda2;
  return p * a1 * a1 * std::pow(lambda1, 4 * m) +
         (1 - p) * a2 * a2 * (1 - std::pow(lambda2, 4)) * std::pow(lambda2, 8 * m);
}

double SeparabilityCells::diag_weight(int m, int n_max) const {
  // sum_{n >= n_max} alpha_mn in closed form
  const double a1 = 1 - lambda1 * lambda1, a2 = 1 - lambda2 * lambda2;
  const double tail = p * a1 * std::pow(lambda1, 2 * (m + n_max)) + (1 - p) * a2 * a2 * std::pow(lambda2, 4 * (m + n_max));
  return diag_weight(m) + tail;
}

double SeparabilityCells::alpha(int m, int n) const {
  const double a1 = 1 - lambda1 * lambda1, a2 = 1 - lambda2 * lambda2;
  return p * a1 * a1 * std::pow(lambda1, 2 * (m + n)) +
         (1 - p) * a2 * a2 * (1 - std::pow(lambda2, 4)) * std::pow(lambda2, 4 * (m + n));
}

double SeparabilityCells::beta(int m, int n) const {
  return p * (1 - lambda1 * lambda1) * std::pow(lambda1, m + n);
}

double SeparabilityCells::gamma(int m, int n) const {
  const double a2 = 1 - lambda2 * lambda2;
  return (1 - p) * a2 * a2 * std::pow(lambda2, 2 * (m + n));
}

MatrixXc SeparabilityCells::reconstruct(int n_max) const {
  MatrixXc out = MatrixXc::Zero(n_max * n_max, n_max * n_max);
  for (int m = 0; m < n_max; ++m) {
    const int mm = flat_index(m, m, n_max);
    out(mm, mm) += diag_weight(m, n_max);
    for (int n = 0; n < n_max; ++n) {
      if (n == m) continue;
      const int nn = flat_index(n, n, n_max), mn = flat_index(m, n, n_max), nm = flat_index(n, m, n_max);
      const double a = 0.5 * alpha(m, n), b = 0.5 * beta(m, n), g = 0.5 * gamma(m, n);
      out(mm, mm) += a;
      out(nn, nn) += a;
      out(mm, nn) += b;
      out(nn, mm) += b;
      out(mn, mn) += g;
      out(nm, nm) += g;
    }
  }
  return out;
}

SeparabilityCells separability_cells(const WernerParams& params) {
  return {params.p, params.lambda1(), params.lambda2()};
}

double positivity_order_bound(double r, double s, int k) {
  const double l1 = std::tanh(r), l2 = std::tanh(s);
  if (l1 == 0) return 1.0;
  if (l2 == 0) return 0.0;
  const double a1 = 1 - l1 * l1, a2 = 1 - l2 * l2;
  // (alpha - beta) >= 0  <=>  p <= E / (E + N1 - N2),
  // E = a2^2 (1 - l2^4) l2^{4k}, N1 = a1 l1^k, N2 = a1^2 l1^{2k}
  const double n1 = a1 * std::pow(l1, k);
  const double log_ratio = std::log(a1) + k * std::log(l1) + std::log1p(-n1) - 2 * std::log(a2) -
                           std::log1p(-std::pow(l2, 4)) - 4 * k * std::log(l2);
  return logistic_bound(log_ratio);
}

SeparableBound largest_separable_p(double r, double s, int horizon) {
  const double l1 = std::tanh(r), l2 = std::tanh(s);
  if (l1 == 0) return {1.0, Regime::kFirstOrder, 0.0};
  if (l2 == 0) return {0.0, Regime::kAnyPositiveP, kInf};
  const double a1 = 1 - l1 * l1, a2 = 1 - l2 * l2;
  const double q = l1 / (l2 * l2);
  const double qt = l1 / std::pow(l2, 4);

  double best = 1.0;
  for (int k = 1; k <= horizon; ++k)
    best = std::min({best, ppt_order_bound(r, s, k), positivity_order_bound(r, s, k)});

  // k -> infinity
  double limit_ppt = q > 1 && !near_one(q) ? 0.0 : (near_one(q) ? a2 * a2 / (a2 * a2 + a1) : 1.0);
  SeparableBound out;
  out.ratio = qt;
  double limit_pos;
  if (near_one(qt)) {
    out.regime = Regime::kConstant;
    limit_pos = 1.0 / (1.0 + a1 / (a2 * a2 * (1 - std::pow(l2, 4))));
  } else if (qt > 1) {
    out.regime = Regime::kAnyPositiveP;
    limit_pos = 0.0;
  } else {
    out.regime = Regime::kFirstOrder;
    limit_pos = 1.0;
  }
  out.p_max = std::min({best, limit_ppt, limit_pos});
  return out;
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::kEntangledPptDirect: return "entangled_ppt_direct";
    case Criterion::kEntangledPptMapped: return "entangled_ppt_mapped";
    case Criterion::kSeparableSufficient: return "separable_sufficient";
    case Criterion::kNonlocal: return "nonlocal";
    case Criterion::kSqueezed: return "squeezed";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kAnalytic: return "analytic";
    case Method::kBruteForce: return "brute_force";
    case Method::kBoth: return "both";
  }
  return "?";
}

CriterionVerdict separability_sufficient(const WernerParams& params) {
  const auto bound = largest_separable_p(params.r, params.s);
  CriterionVerdict v;
  v.criterion = Criterion::kSeparableSufficient;
  v.threshold_p = bound.p_max;
  v.decision = params.p <= bound.p_max;
  v.margin = bound.p_max - params.p;
  v.method = Method::kAnalytic;
  return v;
}

CriterionVerdict entangled_ppt_direct(const WernerParams& params, const TwoModeDensityMatrix* rho) {
  const auto th = direct_entanglement_threshold(params.r, params.s);
  CriterionVerdict v;
  v.criterion = Criterion::kEntangledPptDirect;
  v.threshold_p = th.p;
  v.decision = params.p > th.p;
  v.margin = params.p - th.p;
  v.method = Method::kAnalytic;
  if (rho == nullptr) return v;

  const double numeric_min = ppt_spectrum_numeric(*rho).min();
  const double truncated_min = ppt_spectrum_analytic(params, rho->n_max()).enumerate(rho->n_max()).front();
  if (std::abs(numeric_min - truncated_min) > tol::kOracle) {
    std::ostringstream msg;
    msg << "entangled_ppt_direct: brute-force minimum eigenvalue " << numeric_min
        << " disagrees with the analytic spectrum (" << truncated_min << ")";
    throw ConsistencyError(msg.str());
  }
  const bool numeric_entangled = numeric_min < 0;
  if (numeric_entangled && !v.decision)
    throw ConsistencyError("entangled_ppt_direct: truncated state is NPT below the analytic threshold");
  // A PPT truncation cannot refute entanglement carried by higher orders.
  if (numeric_entangled == v.decision) v.method = Method::kBoth;
  return v;
}

CriterionVerdict entangled_ppt_mapped(const WernerParams& params, const TwoModeDensityMatrix* rho) {
  const double th = std::min(1.0, mapped_entanglement_threshold(params.r, params.s));
  CriterionVerdict v;
  v.criterion = Criterion::kEntangledPptMapped;
  v.threshold_p = th;
  v.decision = params.p > th;
  v.margin = params.p - th;
  v.method = Method::kAnalytic;
  if (rho == nullptr) return v;

  const double closed = min_partial_transpose_eigenvalue(closed_form_rho4(params));
  const double mapped = min_partial_transpose_eigenvalue(map_to_qubits(*rho).rho4);
  if ((mapped < 0) == v.decision) {
    v.method = Method::kBoth;
  } else if (std::abs(closed) > rho->trace_deficit + tol::kQubitMap) {
    std::ostringstream msg;
    msg << "entangled_ppt_mapped: truncated map gives minimum eigenvalue " << mapped << ", closed form " << closed;
    throw ConsistencyError(msg.str());
  }
  return v;
}

CriterionVerdict nonlocal(const WernerParams& params, const TwoModeDensityMatrix* rho) {
  const double th = nonlocality_threshold(params.r, params.s);
  CriterionVerdict v;
  v.criterion = Criterion::kNonlocal;
  v.threshold_p = th;
  v.decision = params.p > th;
  v.margin = params.p - th;
  v.method = Method::kAnalytic;
  if (rho == nullptr) return v;

  const double closed = bell_analysis(QubitPairState::from_matrix(closed_form_rho4(params))).bell_max;
  const auto mapped = bell_analysis(map_to_qubits(*rho));
  if (mapped.nonlocal() == v.decision) {
    v.method = Method::kBoth;
  } else if (std::abs(closed - 2.0) > 4 * rho->trace_deficit + tol::kQubitMap) {
    std::ostringstream msg;
    msg << "nonlocal: truncated Bell factor " << mapped.bell_max << ", closed form " << closed;
    throw ConsistencyError(msg.str());
  }
  return v;
}

// ---------------------------------------------------------------------------
// Squeezing

double quadrature_difference_variance(const TwoModeDensityMatrix& rho) {
  const int n = rho.n_max();
  MatrixXc a = MatrixXc::Zero(n, n);
  for (int m = 0; m + 1 < n; ++m) a(m, m + 1) = std::sqrt(double(m + 1));
  const MatrixXc x = (a + a.adjoint()) / std::sqrt(2.0);
  const MatrixXc x2 = x * x;
  const MatrixXc id = MatrixXc::Identity(n, n);
  const double mean = expectation_product(rho.data, x, id) - expectation_product(rho.data, id, x);
  const double second = expectation_product(rho.data, x2, id) + expectation_product(rho.data, id, x2) -
                        2.0 * expectation_product(rho.data, x, x);
  return second - mean * mean;
}

double mixture_variance(const WernerParams& params) {
  return params.p * std::exp(-2 * params.r) + (1 - params.p) * std::cosh(2 * params.s);
}

double squeezing_threshold(double r, double s) {
  if (r == 0) return 1.0;
  const double c = std::cosh(2 * s);
  return (c - 1) / (c - std::exp(-2 * r));
}

double squeezing_threshold_lambda_form(double r) {
  const double l = std::tanh(r);
  return 1.0 / (1.0 + 2 * l * (1 - l * l) / ((1 + l) * (1 + 3 * l * l)));
}

double squeezing_threshold_photon_form(double r, double s) {
  const double n_t = std::sinh(s) * std::sinh(s);
  return 1.0 / (1.0 + (1 - std::exp(-2 * r)) / (1 + 4 * n_t));
}

double squeezing_allowance(const WernerParams& params, const TwoModeDensityMatrix& rho) {
  // Mass beyond the cutoff carries roughly (2n + 1) per mode of variance.
  const double scale = std::cosh(std::max(params.r, params.s));
  return tol::kVariance + 4.0 * (rho.n_max() + scale * scale) * rho.trace_deficit;
}

SqueezingReport squeezing_criterion(const WernerParams& params, const TwoModeDensityMatrix& rho) {
  SqueezingReport out;
  out.variance_matrix = quadrature_difference_variance(rho);
  out.variance_closed_form = mixture_variance(params);
  out.threshold = squeezing_threshold(params.r, params.s);
  if (params.r == params.s) out.threshold_photon_form = squeezing_threshold_lambda_form(params.r);

  const double allowance = squeezing_allowance(params, rho);
  const double gap = std::abs(out.variance_matrix - out.variance_closed_form);
  if (gap > allowance) {
    std::ostringstream msg;
    msg << "squeezing_criterion: truncated variance " << out.variance_matrix << " vs closed form "
        << out.variance_closed_form << " (allowed " << allowance << ")";
    throw ConsistencyError(msg.str());
  }
  auto& v = out.verdict;
  v.criterion = Criterion::kSqueezed;
  v.decision = out.variance_closed_form < 1.0;
  v.threshold_p = out.threshold;
  v.margin = params.p - out.threshold;
  const bool numeric = out.variance_matrix < 1.0;
  if (numeric == v.decision) v.method = Method::kBoth;
  else if (std::abs(out.variance_closed_form - 1.0) > allowance)
    throw ConsistencyError("squeezing_criterion: truncated and closed-form verdicts disagree away from the boundary");
  else v.method = Method::kAnalytic;
  return out;
}

}  // namespace cvw
