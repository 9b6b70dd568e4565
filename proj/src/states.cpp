#include "cvwerner/states.hpp"

#include <sstream>

namespace cvw {

WernerParams WernerParams::make(double p, double r, double s) {
  std::ostringstream msg;
  if (!(p >= 0.0 && p <= 1.0)) msg << "p must satisfy 0 <= p <= 1 (got " << p << ")";
  else if (!(r >= 0.0) || !std::isfinite(r)) msg << "r must be finite and >= 0 (got " << r << ")";
  else if (!(s >= 0.0) || !std::isfinite(s)) msg << "s must be finite and >= 0 (got " << s << ")";
  else return WernerParams{p, r, s};
  throw ParametersOutOfRange(msg.str());
}

double nopa_tail(double r, int n_max) { return std::pow(std::tanh(r), 2.0 * n_max); }

double thermal_tail(double s, int n_max) {
  const double kept = 1.0 - std::pow(std::tanh(s), 2.0 * n_max);
  return 1.0 - kept * kept;
}

namespace {

void add_nopa(MatrixXc& data, double weight, double r, int n_max) {
  const double l = std::tanh(r);
  const double norm = 1.0 - l * l;
  for (int m = 0; m < n_max; ++m)
    for (int n = 0; n < n_max; ++n)
      data(flat_index(m, m, n_max), flat_index(n, n, n_max)) += weight * norm * std::pow(l, m + n);
}

void add_thermal(MatrixXc& data, double weight, double s, int n_max) {
  const double l = std::tanh(s);
  const double norm = (1.0 - l * l) * (1.0 - l * l);
  for (int m = 0; m < n_max; ++m)
    for (int n = 0; n < n_max; ++n) {
      const int k = flat_index(m, n, n_max);
      data(k, k) += weight * norm * std::pow(l, 2 * (m + n));
    }
}

int minimal_cutoff(double p, double r, double s, double tail_bound) {
  int n = 1;
  while (p * nopa_tail(r, n) > tail_bound / 2 || (1 - p) * thermal_tail(s, n) > tail_bound / 2) {
    if (++n > 1'000'000) break;
  }
  return n;
}

TwoModeDensityMatrix finish(MatrixXc data, const FockCutoff& cutoff, double deficit, int minimal, const char* what) {
  if (deficit > cutoff.tail_bound) {
    std::ostringstream msg;
    msg << what << ": truncation at n_max = " << cutoff.n_max << " loses " << deficit
        << " of the trace (tail bound " << cutoff.tail_bound << "); need n_max >= " << minimal;
    throw CutoffTooSmall(msg.str(), minimal);
  }
  return TwoModeDensityMatrix{cutoff, std::move(data), deficit};
}

}  // namespace

TwoModeDensityMatrix nopa_state(double r, const FockCutoff& cutoff) {
  if (!(r >= 0)) throw ParametersOutOfRange("nopa_state: r must be >= 0");
  MatrixXc data = MatrixXc::Zero(cutoff.dim(), cutoff.dim());
  add_nopa(data, 1.0, r, cutoff.n_max);
  return finish(std::move(data), cutoff, nopa_tail(r, cutoff.n_max),
                minimal_cutoff(1.0, r, 0.0, 2 * cutoff.tail_bound), "nopa_state");
}

TwoModeDensityMatrix thermal_product_state(double s, const FockCutoff& cutoff) {
  if (!(s >= 0)) throw ParametersOutOfRange("thermal_product_state: s must be >= 0");
  MatrixXc data = MatrixXc::Zero(cutoff.dim(), cutoff.dim());
  add_thermal(data, 1.0, s, cutoff.n_max);
  return finish(std::move(data), cutoff, thermal_tail(s, cutoff.n_max),
                minimal_cutoff(0.0, 0.0, s, 2 * cutoff.tail_bound), "thermal_product_state");
}

TwoModeDensityMatrix werner_state(const WernerParams& params, const FockCutoff& cutoff) {
  const auto& [p, r, s] = params;
  MatrixXc data = MatrixXc::Zero(cutoff.dim(), cutoff.dim());
  if (p > 0) add_nopa(data, p, r, cutoff.n_max);
  if (p < 1) add_thermal(data, 1 - p, s, cutoff.n_max);
  const double deficit = p * nopa_tail(r, cutoff.n_max) + (1 - p) * thermal_tail(s, cutoff.n_max);
  return finish(std::move(data), cutoff, deficit, minimal_cutoff(p, r, s, cutoff.tail_bound), "werner_state");
}

MatrixXc thermal_single_mode(double s, int n_max) {
  const double l = std::tanh(s);
  MatrixXc out = MatrixXc::Zero(n_max, n_max);
  for (int m = 0; m < n_max; ++m) out(m, m) = (1 - l * l) * std::pow(l, 2 * m);
  return out;
}

FockCutoff select_cutoff(const WernerParams& params, double tail_bound) {
  if (!(tail_bound > 0 && tail_bound < 1)) throw ParametersOutOfRange("select_cutoff: tail_bound must lie in (0, 1)");
  const int n = minimal_cutoff(params.p, params.r, params.s, tail_bound);
  if (n > kMaxCutoff) {
    std::ostringstream msg;
    msg << "select_cutoff: (p, r, s) = (" << params.p << ", " << params.r << ", " << params.s << ") needs n_max = " << n
        << " for tail bound " << tail_bound << ", beyond the dense limit " << kMaxCutoff;
    throw ParametersOutOfRange(msg.str());
  }
  return FockCutoff::make(std::max(n, kMinCutoff), tail_bound);
}

FockCutoff select_cutoff_relaxed(const WernerParams& params, double tail_bound, bool even) {
  try {
    auto c = select_cutoff(params, tail_bound);
    if (even && c.n_max % 2 != 0) ++c.n_max;
    return c;
  } catch (const ParametersOutOfRange&) {
  }
  // Keep the densest grid allowed and report the mass actually lost.
  const double lost = params.p * nopa_tail(params.r, kMaxCutoff) + (1 - params.p) * thermal_tail(params.s, kMaxCutoff);
  if (lost >= 0.5) throw ParametersOutOfRange("select_cutoff_relaxed: squeezing too strong for a dense truncation");
  return FockCutoff::make(kMaxCutoff, std::max(lost * (1 + 1e-9), tail_bound));
}

}  // namespace cvw
