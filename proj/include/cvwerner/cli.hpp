#pragma once

// Library side of the command-line tool: point reports, CSV sweeps and the
// cross-validation suite. The executable in tools/ only parses arguments.

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvwerner/core.hpp"
#include "cvwerner/states.hpp"

namespace cvw::cli {

/// Thrown for malformed command lines, specs and config files.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Axis { kP, kR, kS };

std::string to_string(Axis a);
Axis parse_axis(const std::string& name);

struct AxisRange {
  Axis axis = Axis::kR;
  double min = 0;
  double max = 1;
  int steps = 2;

  double value(int i) const { return min + (max - min) * i / (steps - 1); }
  std::string describe() const;
};

/// "r[0.1,2,20]" -> {r, 0.1, 2, 20}.
AxisRange parse_axis_range(const std::string& text);

inline const std::vector<std::string>& sweep_output_names() {
  static const std::vector<std::string> names{"p_min_entangled_direct", "p_min_entangled_mapped", "p_max_separable",
                                              "p_min_nonlocal",         "p_min_squeezed",         "fidelity_w"};
  return names;
}

struct SweepSpec {
  AxisRange axis1;
  AxisRange axis2;
  std::optional<double> fixed;  // value of the parameter not on an axis
  bool r_equals_s = false;      // ties the missing one of r, s to the other
  std::vector<std::string> outputs;
  double tail_bound = kDefaultTailBound;
  std::string output_path;
  int threads = 0;  // 0: hardware concurrency

  /// Throws UsageError on any violated invariant.
  void validate() const;
  /// Parameter point of row (i, j).
  WernerParams point(int i, int j) const;
};

/// Echo lines, header and rows; identical bytes for identical specs.
std::string sweep_csv(const SweepSpec& spec);

/// Writes sweep_csv to spec.output_path (stdout when empty).
void cmd_sweep(const SweepSpec& spec, std::ostream& out);

struct EvalOptions {
  std::vector<std::string> criteria{"all"};
  double tail_bound = kDefaultTailBound;
  std::optional<int> n_max;
};

inline const std::vector<std::string>& eval_criterion_names() {
  static const std::vector<std::string> names{"entangled_ppt_direct", "entangled_ppt_mapped", "separable_sufficient",
                                              "nonlocal",             "squeezed",             "fidelity"};
  return names;
}

void cmd_eval(const WernerParams& params, const EvalOptions& options, std::ostream& out);

struct CheckResult {
  std::string name;
  double worst_deviation = 0;
  double tolerance = 0;
  bool passed = true;
  std::string worst_point;
  std::string failure;  // first failure message, empty when passed
};

struct ValidationOptions {
  double tail_bound = kDefaultTailBound;
  std::optional<int> n_max;
  /// Closed-form two-qubit image under test; replaceable for fault injection.
  std::function<Matrix4c(const WernerParams&)> closed_form_rho4;
};

std::vector<CheckResult> run_validation(int grid_density, const ValidationOptions& options);

/// Prints the report; returns the process exit status.
int cmd_validate(int grid_density, const ValidationOptions& options, std::ostream& out);

/// key=value lines with '#' comments.
std::map<std::string, std::string> read_config(const std::string& path);

/// Printf "%.12g".
std::string format_real(double v);

}  // namespace cvw::cli
