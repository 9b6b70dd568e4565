#include "cvwerner/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "cvwerner/criteria.hpp"
#include "cvwerner/qubit_map.hpp"
#include "cvwerner/teleport.hpp"

namespace cvw::cli {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string to_string(Axis a) {
  switch (a) {
    case Axis::kP: return "p";
    case Axis::kR: return "r";
    case Axis::kS: return "s";
  }
  return "?";
}

Axis parse_axis(const std::string& name) {
  if (name == "p") return Axis::kP;
  if (name == "r") return Axis::kR;
  if (name == "s") return Axis::kS;
  throw UsageError("unknown axis '" + name + "' (expected p, r or s)");
}

std::string AxisRange::describe() const {
  return to_string(axis) + "[" + format_real(min) + "," + format_real(max) + "," + std::to_string(steps) + "]";
}

namespace {

double parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("cannot read " + what + " from '" + text + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

AxisRange parse_axis_range(const std::string& text) {
  const auto open = text.find('['), close = text.rfind(']');
  if (open == std::string::npos || close != text.size() - 1)
    throw UsageError("axis range must look like r[0.1,2,20] (got '" + text + "')");
  AxisRange out;
  out.axis = parse_axis(trim(text.substr(0, open)));
  std::vector<std::string> parts;
  std::stringstream body(text.substr(open + 1, close - open - 1));
  for (std::string item; std::getline(body, item, ',');) parts.push_back(trim(item));
  if (parts.size() != 3) throw UsageError("axis range needs min,max,steps (got '" + text + "')");
  out.min = parse_real(parts[0], "axis min");
  out.max = parse_real(parts[1], "axis max");
  const double steps = parse_real(parts[2], "axis steps");
  if (steps != std::floor(steps)) throw UsageError("axis steps must be an integer");
  out.steps = static_cast<int>(steps);
  return out;
}

// ---------------------------------------------------------------------------
// sweep

namespace {

bool needs_p(const std::vector<std::string>& outputs) {
  return std::find(outputs.begin(), outputs.end(), "fidelity_w") != outputs.end();
}

Axis missing_axis(const SweepSpec& spec) {
  for (Axis a : {Axis::kP, Axis::kR, Axis::kS})
    if (a != spec.axis1.axis && a != spec.axis2.axis) return a;
  return Axis::kP;
}

void check_range(const AxisRange& a) {
  if (a.steps < 2) throw UsageError("axis " + to_string(a.axis) + ": steps must be >= 2");
  if (!(a.min < a.max)) throw UsageError("axis " + to_string(a.axis) + ": min must be < max");
  if (a.min < 0) throw UsageError("axis " + to_string(a.axis) + ": values must be >= 0");
  if (a.axis == Axis::kP && a.max > 1) throw UsageError("axis p: values must be <= 1");
}

double sweep_value(const std::string& output, const WernerParams& w) {
  if (output == "p_min_entangled_direct") return direct_entanglement_threshold(w.r, w.s).p;
  if (output == "p_min_entangled_mapped") return std::min(1.0, mapped_entanglement_threshold(w.r, w.s));
  if (output == "p_max_separable") return largest_separable_p(w.r, w.s).p_max;
  if (output == "p_min_nonlocal") return nonlocality_threshold(w.r, w.s);
  if (output == "p_min_squeezed") return squeezing_threshold(w.r, w.s);
  if (output == "fidelity_w")
    return w.r == w.s ? fidelity_werner(w.p, w.r).fidelity_closed_form : fidelity_numeric_oracle(w);
  throw UsageError("unknown output '" + output + "'");
}

}  // namespace

void SweepSpec::validate() const {
  if (axis1.axis == axis2.axis) throw UsageError("axis1 and axis2 must differ");
  check_range(axis1);
  check_range(axis2);
  if (outputs.empty()) throw UsageError("no outputs requested");
  for (const auto& o : outputs) {
    const auto& known = sweep_output_names();
    if (std::find(known.begin(), known.end(), o) == known.end()) throw UsageError("unknown output '" + o + "'");
  }
  if (!(tail_bound > 0 && tail_bound < 1)) throw UsageError("tail_bound must lie in (0, 1)");
  const Axis rest = missing_axis(*this);
  if (r_equals_s) {
    if (rest == Axis::kP) throw UsageError("r_equals_s needs p on one axis");
    if (fixed) throw UsageError("give either a fixed value or r_equals_s, not both");
    return;
  }
  if (fixed) {
    if (*fixed < 0 || (rest == Axis::kP && *fixed > 1))
      throw UsageError("fixed " + to_string(rest) + " = " + format_real(*fixed) + " is out of range");
  } else if (rest != Axis::kP || needs_p(outputs)) {
    throw UsageError("parameter " + to_string(rest) + " is on no axis; give fixed=<value> or r_equals_s");
  }
}

WernerParams SweepSpec::point(int i, int j) const {
  double v[3] = {0, 0, 0};
  v[static_cast<int>(axis1.axis)] = axis1.value(i);
  v[static_cast<int>(axis2.axis)] = axis2.value(j);
  const Axis rest = missing_axis(*this);
  if (r_equals_s) v[static_cast<int>(rest)] = v[rest == Axis::kR ? 2 : 1];
  else if (fixed) v[static_cast<int>(rest)] = *fixed;
  return WernerParams::make(v[0], v[1], v[2]);
}

std::string sweep_csv(const SweepSpec& spec) {
  spec.validate();
  std::ostringstream head;
  head << "# cvwerner sweep\n";
  head << "# axis1=" << spec.axis1.describe() << "\n";
  head << "# axis2=" << spec.axis2.describe() << "\n";
  if (spec.r_equals_s) head << "# constraint=r_equals_s\n";
  else if (spec.fixed) head << "# fixed=" << to_string(missing_axis(spec)) << "=" << format_real(*spec.fixed) << "\n";
  head << "# outputs=";
  for (std::size_t k = 0; k < spec.outputs.size(); ++k) head << (k ? "," : "") << spec.outputs[k];
  head << "\n# tail_bound=" << format_real(spec.tail_bound) << "\n";
  head << to_string(spec.axis1.axis) << "," << to_string(spec.axis2.axis);
  for (const auto& o : spec.outputs) head << "," << o;
  head << "\n";

  const int rows = spec.axis1.steps;
  std::vector<std::string> blocks(rows);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < rows; i = next++) {
      std::string block;
      for (int j = 0; j < spec.axis2.steps; ++j) {
        const auto w = spec.point(i, j);
        block += format_real(spec.axis1.value(i)) + "," + format_real(spec.axis2.value(j));
        for (const auto& o : spec.outputs) block += "," + format_real(sweep_value(o, w));
        block += "\n";
      }
      blocks[i] = std::move(block);
    }
  };
  const int n_threads =
      std::max(1, std::min(rows, spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string out = head.str();
  for (const auto& b : blocks) out += b;
  return out;
}

void cmd_sweep(const SweepSpec& spec, std::ostream& out) {
  const std::string csv = sweep_csv(spec);
  if (spec.output_path.empty()) {
    out << csv;
    return;
  }
  std::ofstream file(spec.output_path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + spec.output_path + "'");
  file << csv;
  if (!file) throw UsageError("write to '" + spec.output_path + "' failed");
  out << "wrote " << spec.axis1.steps * spec.axis2.steps << " rows to " << spec.output_path << "\n";
}

// ---------------------------------------------------------------------------
// eval

namespace {

std::string describe(const WernerParams& w) {
  return "p=" + format_real(w.p) + " r=" + format_real(w.r) + " s=" + format_real(w.s);
}

FockCutoff cutoff_for(const WernerParams& w, double tail_bound, const std::optional<int>& n_max) {
  if (n_max) return FockCutoff::make(*n_max, tail_bound);
  return select_cutoff_relaxed(w, tail_bound, true);
}

void print_verdict(std::ostream& out, const CriterionVerdict& v) {
  out << to_string(v.criterion) << ": " << (v.decision ? "true" : "false");
  if (v.threshold_p) out << "  threshold=" << format_real(*v.threshold_p);
  out << "  margin=" << format_real(v.margin) << "  method=" << to_string(v.method) << "\n";
}

}  // namespace

void cmd_eval(const WernerParams& params, const EvalOptions& options, std::ostream& out) {
  std::vector<std::string> wanted;
  for (const auto& c : options.criteria) {
    if (c == "all") {
      wanted = eval_criterion_names();
      break;
    }
    const auto& known = eval_criterion_names();
    if (std::find(known.begin(), known.end(), c) == known.end()) throw UsageError("unknown criterion '" + c + "'");
    wanted.push_back(c);
  }
  auto has = [&](const char* name) { return std::find(wanted.begin(), wanted.end(), name) != wanted.end(); };

  out << "point: " << describe(params) << "\n";
  std::optional<TwoModeDensityMatrix> rho;
  if (has("entangled_ppt_direct") || has("entangled_ppt_mapped") || has("nonlocal") || has("squeezed")) {
    rho = werner_state(params, cutoff_for(params, options.tail_bound, options.n_max));
    out << "n_max: " << rho->n_max() << "  trace_deficit: " << format_real(rho->trace_deficit)
        << "  tail_bound: " << format_real(rho->cutoff.tail_bound) << "\n";
  }
  const TwoModeDensityMatrix* m = rho ? &*rho : nullptr;
  if (has("entangled_ppt_direct")) print_verdict(out, entangled_ppt_direct(params, m));
  if (has("entangled_ppt_mapped")) print_verdict(out, entangled_ppt_mapped(params, m));
  if (has("separable_sufficient")) print_verdict(out, separability_sufficient(params));
  if (has("nonlocal")) print_verdict(out, nonlocal(params, m));
  if (has("squeezed")) {
    const auto sq = squeezing_criterion(params, *rho);
    print_verdict(out, sq.verdict);
    out << "  variance: closed_form=" << format_real(sq.variance_closed_form)
        << " truncated=" << format_real(sq.variance_matrix);
    if (sq.threshold_photon_form) out << " photon_form_threshold=" << format_real(*sq.threshold_photon_form);
    out << "\n";
  }
  if (has("fidelity")) {
    if (params.r == params.s) {
      const auto f = fidelity_werner_checked(params);
      out << "fidelity: F_W=" << format_real(f.fidelity_closed_form) << "  numeric=" << format_real(*f.fidelity_numeric)
          << "  d=" << format_real(f.d_eff) << "  useful=" << (f.fidelity_closed_form > 0.5 ? "true" : "false")
          << "\n";
    } else {
      const double f = fidelity_numeric_oracle(params);
      out << "fidelity: numeric=" << format_real(f) << "  useful=" << (f > 0.5 ? "true" : "false")
          << "  (closed form needs r = s)\n";
    }
  }
}

// ---------------------------------------------------------------------------
// validate

namespace {

class Tally {
 public:
  explicit Tally(std::string name) { result_.name = std::move(name); }

  void record(const std::string& point, double deviation, double tolerance) {
    const bool ok = deviation <= tolerance;
    if (!ok && result_.passed) {
      std::ostringstream msg;
      msg << "deviation " << format_real(deviation) << " exceeds " << format_real(tolerance) << " at " << point;
      result_.failure = msg.str();
    }
    if (!ok) result_.passed = false;
    if (deviation >= result_.worst_deviation || result_.worst_point.empty()) {
      result_.worst_deviation = deviation;
      result_.tolerance = tolerance;
      result_.worst_point = point;
    }
  }

  void fail(const std::string& point, const std::string& what) {
    if (result_.passed) result_.failure = what + " at " + point;
    result_.passed = false;
    if (result_.worst_point.empty()) result_.worst_point = point;
  }

  CheckResult result() const { return result_; }

 private:
  CheckResult result_;
};

template <typename F>
void guarded(Tally& t, const std::string& point, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    t.fail(point, e.what());
  }
}

double max_abs(const MatrixXc& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

}  // namespace

std::vector<CheckResult> run_validation(int grid_density, const ValidationOptions& options) {
  if (grid_density < 2) throw UsageError("validate: grid density must be >= 2");
  const auto closed_rho4 = options.closed_form_rho4 ? options.closed_form_rho4 : closed_form_rho4;
  const auto ps = linspace(0.2, 0.9, grid_density);
  const auto rs = linspace(0.5, 2.0, grid_density);

  Tally spectrum("ppt_spectrum"), qmap("qubit_map"), decomposition("decomposition"), squeezing("squeezing"),
      verdicts("verdict_consistency"), mapped("mapped_threshold"), bell("nonlocality_threshold"),
      ordering("threshold_ordering"), fidelity("fidelity");

  for (double r : rs)
    for (double s : rs) {
      const std::string rs_point = "r=" + format_real(r) + " s=" + format_real(s);

      guarded(mapped, rs_point, [&] {
        const double expected = mapped_entanglement_threshold(r, s);
        const double found = bisect_mapped_threshold(
            [&](double p) { return closed_rho4(WernerParams::make(p, r, s)); }, 1e-12);
        mapped.record(rs_point, std::abs(found - expected), 1e-6);
      });

      guarded(bell, rs_point, [&] {
        const double th = nonlocality_threshold(r, s);
        if (th >= 1 - 1e-5) return;
        auto bell_at = [&](double p) {
          QubitPairState q;
          q.corr_tensor = closed_form_correlation(WernerParams::make(p, r, s));
          return bell_analysis(q).bell_max;
        };
        const double below = bell_at(th - 1e-5), above = bell_at(th + 1e-5);
        bell.record(rs_point, std::max({0.0, below - 2.0, 2.0 - above}), 0.0);
      });

      guarded(ordering, rs_point, [&] {
        const double sep = largest_separable_p(r, s).p_max;
        const double direct = direct_entanglement_threshold(r, s).p;
        const double map = std::min(1.0, mapped_entanglement_threshold(r, s));
        const double nl = nonlocality_threshold(r, s);
        ordering.record(rs_point, std::max({0.0, sep - direct, direct - map, map - nl}), 1e-12);
      });

      for (double p : ps) {
        const auto w = WernerParams::make(p, r, s);
        const std::string point = describe(w);

        if (r == s) {
          guarded(fidelity, point, [&] {
            const auto f0 = fidelity_werner_checked(w, {0, 0});
            const auto f1 = fidelity_werner_checked(w, {1.0, 0.5});
            fidelity.record(point, std::max(f0.method_agreement, f1.method_agreement), tol::kFidelity);
          });
        }

        std::optional<TwoModeDensityMatrix> rho;
        guarded(verdicts, point, [&] { rho = werner_state(w, cutoff_for(w, options.tail_bound, options.n_max)); });
        if (!rho) continue;
        const std::string where = point + " n_max=" + std::to_string(rho->n_max());

        guarded(spectrum, where, [&] {
          const auto numeric = ppt_spectrum_numeric(*rho).eigenvalues;
          const auto analytic = ppt_spectrum_analytic(w, rho->n_max()).enumerate(rho->n_max());
          if (static_cast<std::size_t>(numeric.size()) != analytic.size())
            throw ConsistencyError("spectrum sizes differ");
          double dev = 0;
          for (std::size_t k = 0; k < analytic.size(); ++k)
            dev = std::max(dev, std::abs(numeric[static_cast<Eigen::Index>(k)] - analytic[k]));
          spectrum.record(where, dev, tol::kOracle);
        });

        guarded(qmap, where, [&] {
          const Matrix4c chi = map_by_chi_contraction(*rho);
          const Matrix4c pauli = map_by_pauli_moments(*rho).rho4;
          const Matrix4c closed = closed_rho4(w);
          const double dev = std::max({max_abs(chi - pauli), max_abs(pauli - closed), max_abs(chi - closed)});
          qmap.record(where, dev, tol::kQubitMap + rho->trace_deficit);
        });

        guarded(decomposition, where, [&] {
          const MatrixXc rebuilt = separability_cells(w).reconstruct(rho->n_max());
          decomposition.record(where, max_abs(rebuilt - rho->data), tol::kQubitMap);
        });

        guarded(squeezing, where, [&] {
          const auto sq = squeezing_criterion(w, *rho);
          squeezing.record(where, std::abs(sq.variance_matrix - sq.variance_closed_form),
                           squeezing_allowance(w, *rho));
        });

        guarded(verdicts, where, [&] {
          entangled_ppt_direct(w, &*rho);
          entangled_ppt_mapped(w, &*rho);
          nonlocal(w, &*rho);
          double dev = 0;
          if (separability_sufficient(w).decision) dev = std::max(0.0, -ppt_spectrum_numeric(*rho).min());
          verdicts.record(where, dev, tol::kPositivity);
        });
      }
    }

  return {spectrum.result(), qmap.result(),    decomposition.result(), squeezing.result(), verdicts.result(),
          mapped.result(),   bell.result(),    ordering.result(),      fidelity.result()};
}

int cmd_validate(int grid_density, const ValidationOptions& options, std::ostream& out) {
  const auto results = run_validation(grid_density, options);
  bool ok = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst=" << format_real(r.worst_deviation)
        << "  tol=" << format_real(r.tolerance) << "  at " << r.worst_point << "\n";
    if (!r.passed) {
      out << "     " << r.failure << "\n";
      ok = false;
    }
  }
  out << (ok ? "all checks passed" : "validation failed") << "\n";
  return ok ? 0 : 1;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  std::map<std::string, std::string> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace cvw::cli
