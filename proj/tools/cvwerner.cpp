// cvwerner: evaluate criteria at a point, sweep parameter grids to CSV, or
// run the cross-validation suite.
//
//   cvwerner eval p=0.5 r=1 s=1 --criteria all
//   cvwerner sweep axis1=r[0.1,2,20] axis2=s[0.1,2,20] fixed=0.5 outputs=p_min_entangled_direct --output fig.csv
//   cvwerner validate 3

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <sstream>

#include "cvwerner/cli.hpp"

namespace {

using cvw::cli::UsageError;
using Settings = std::map<std::string, std::string>;

std::string normalize_key(std::string key) {
  for (char& c : key)
    if (c == '-') c = '_';
  return key;
}

// Later sources override earlier ones: config file, then key=value words.
Settings collect(const std::string& config_path, const std::vector<std::string>& words) {
  Settings out;
  if (!config_path.empty())
    for (const auto& [k, v] : cvw::cli::read_config(config_path)) out[normalize_key(k)] = v;
  for (const auto& w : words) {
    const auto eq = w.find('=');
    if (eq == std::string::npos) out[normalize_key(w)] = "true";
    else out[normalize_key(w.substr(0, eq))] = w.substr(eq + 1);
  }
  return out;
}

double real_setting(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) throw UsageError("missing " + key + "=<value>");
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used == it->second.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("cannot read " + key + " from '" + it->second + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

void reject_unknown(const Settings& s, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : s) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw UsageError("unknown setting '" + k + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CV Werner state entanglement, nonlocality, squeezing and teleportation"};
  app.require_subcommand(1);
  app.fallthrough();

  double tail_bound = cvw::kDefaultTailBound;
  int n_max = 0;
  std::string config_path, output_path;
  auto* tail_opt = app.add_option("--tail-bound", tail_bound, "Trace mass allowed beyond the Fock cutoff");
  auto* nmax_opt = app.add_option("--n-max", n_max, "Fock cutoff per mode (overrides automatic selection)");
  app.add_option("--config", config_path, "key=value file; command-line values take precedence");
  auto* out_opt = app.add_option("--output", output_path, "Output file (stdout when omitted)");

  std::vector<std::string> eval_words, sweep_words;
  std::string criteria;
  auto* eval = app.add_subcommand("eval", "Report every requested criterion at one (p, r, s)");
  eval->add_option("settings", eval_words, "p=<real> r=<real> s=<real>");
  auto* criteria_opt = eval->add_option("--criteria", criteria, "Comma list of criteria or 'all'");

  auto* sweep = app.add_subcommand("sweep", "Tabulate thresholds over a 2D grid as CSV");
  sweep->add_option("settings", sweep_words,
                    "axis1=<a>[min,max,steps] axis2=... outputs=<list> fixed=<value> | r_equals_s, threads=<n>");

  int density = 3;
  auto* validate = app.add_subcommand("validate", "Cross-check every closed form against brute force");
  validate->add_option("density", density, "Points per parameter axis")->check(CLI::Range(2, 1000));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) {
      auto s = collect(config_path, eval_words);
      reject_unknown(s, {"p", "r", "s", "criteria", "tail_bound", "n_max", "output"});
      cvw::cli::EvalOptions opt;
      if (criteria_opt->count()) s["criteria"] = criteria;
      if (s.count("criteria")) opt.criteria = split_list(s["criteria"]);
      opt.tail_bound = tail_opt->count() || !s.count("tail_bound") ? tail_bound : real_setting(s, "tail_bound");
      if (nmax_opt->count()) opt.n_max = n_max;
      else if (s.count("n_max")) opt.n_max = static_cast<int>(real_setting(s, "n_max"));
      cvw::WernerParams point;
      try {
        point = cvw::WernerParams::make(real_setting(s, "p"), real_setting(s, "r"), real_setting(s, "s"));
      } catch (const cvw::ParametersOutOfRange& e) {
        throw UsageError(e.what());
      }
      cvw::cli::cmd_eval(point, opt, std::cout);
      return 0;
    }
    if (*sweep) {
      auto s = collect(config_path, sweep_words);
      reject_unknown(s, {"axis1", "axis2", "outputs", "fixed", "r_equals_s", "constraint", "threads", "tail_bound",
                         "n_max", "output"});
      cvw::cli::SweepSpec spec;
      if (!s.count("axis1") || !s.count("axis2")) throw UsageError("sweep needs axis1=... and axis2=...");
      spec.axis1 = cvw::cli::parse_axis_range(s["axis1"]);
      spec.axis2 = cvw::cli::parse_axis_range(s["axis2"]);
      spec.outputs = split_list(s.count("outputs") ? s["outputs"] : "");
      if (s.count("fixed")) spec.fixed = real_setting(s, "fixed");
      spec.r_equals_s = s.count("r_equals_s") || (s.count("constraint") && s["constraint"] == "r_equals_s");
      if (s.count("threads")) spec.threads = static_cast<int>(real_setting(s, "threads"));
      spec.tail_bound = tail_opt->count() || !s.count("tail_bound") ? tail_bound : real_setting(s, "tail_bound");
      spec.output_path = out_opt->count() || !s.count("output") ? output_path : s["output"];
      cvw::cli::cmd_sweep(spec, std::cout);
      return 0;
    }
    if (*validate) {
      const auto s = collect(config_path, {});
      cvw::cli::ValidationOptions opt;
      opt.tail_bound = tail_opt->count() || !s.count("tail_bound") ? tail_bound : real_setting(s, "tail_bound");
      if (nmax_opt->count()) opt.n_max = n_max;
      else if (s.count("n_max")) opt.n_max = static_cast<int>(real_setting(s, "n_max"));
      return cvw::cli::cmd_validate(density, opt, std::cout);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const cvw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
