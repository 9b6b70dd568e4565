#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvwerner/cli.hpp"
#include "cvwerner/qubit_map.hpp"

using namespace cvw;
using namespace cvw::cli;

namespace {

std::vector<std::vector<double>> data_rows(const std::string& csv, std::string* header = nullptr) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv);
  bool seen_header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      if (header) *header = line;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

struct ToolRun {
  int status;
  std::string out;
};

ToolRun run_tool(const std::string& args) {
  const char* tool = std::getenv("CVWERNER_TOOL");
  REQUIRE(tool != nullptr);
  const auto out_path = std::filesystem::temp_directory_path() / "cvwerner_cli_test.out";
  const std::string cmd = std::string(tool) + " " + args + " > " + out_path.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return {WEXITSTATUS(raw), buf.str()};
}

}  // namespace

TEST_CASE("axis ranges") {
  const auto a = parse_axis_range("r[0.1,2,20]");
  CHECK(a.axis == Axis::kR);
  CHECK(a.min == 0.1);
  CHECK(a.max == 2.0);
  CHECK(a.steps == 20);
  CHECK(a.value(19) == 2.0);
  CHECK(a.describe() == "r[0.1,2,20]");
  CHECK_THROWS_AS(parse_axis_range("q[0,1,3]"), UsageError);
  CHECK_THROWS_AS(parse_axis_range("r[0,1]"), UsageError);
  CHECK_THROWS_AS(parse_axis_range("r[0,1,2.5]"), UsageError);
  CHECK_THROWS_AS(parse_axis_range("r0,1,2"), UsageError);
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec;
  spec.axis1 = parse_axis_range("r[0.1,2,4]");
  spec.axis2 = parse_axis_range("s[0.1,2,4]");
  spec.outputs = {"p_min_nonlocal"};
  CHECK_NOTHROW(spec.validate());

  auto bad = spec;
  bad.axis2 = parse_axis_range("r[0.1,2,4]");
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = spec;
  bad.axis1.steps = 1;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = spec;
  bad.axis1.min = 3;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = spec;
  bad.outputs = {"p_min_magic"};
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = spec;
  bad.outputs = {"fidelity_w"};
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad.fixed = 0.5;
  CHECK_NOTHROW(bad.validate());
  bad = spec;
  bad.r_equals_s = true;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad = spec;
  bad.axis1 = parse_axis_range("p[0,1.5,3]");
  bad.fixed = 1.0;
  CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("threshold sweep over (r, s)") {
  SweepSpec spec;
  spec.axis1 = parse_axis_range("r[0.1,2,20]");
  spec.axis2 = parse_axis_range("s[0.1,2,20]");
  spec.outputs = {"p_min_entangled_direct", "p_min_entangled_mapped", "p_min_nonlocal"};
  std::string header;
  const std::string csv = sweep_csv(spec);
  const auto rows = data_rows(csv, &header);
  CHECK(header == "r,s,p_min_entangled_direct,p_min_entangled_mapped,p_min_nonlocal");
  REQUIRE(rows.size() == 400);
  CHECK(rows[0][0] == 0.1);
  CHECK(rows[1][1] == doctest::Approx(0.2));
  CHECK(rows[20][0] == doctest::Approx(0.2));
  for (const auto& row : rows) {
    CHECK(row[2] <= row[3]);
    CHECK(row[3] <= row[4]);
  }
  CHECK(csv.rfind("# cvwerner sweep\n", 0) == 0);
  CHECK(csv.find("# tail_bound=1e-10\n") != std::string::npos);

  auto serial = spec;
  serial.threads = 1;
  auto parallel = spec;
  parallel.threads = 4;
  CHECK(sweep_csv(serial) == sweep_csv(parallel));
  CHECK(sweep_csv(spec) == csv);
}

TEST_CASE("nonlocality approaches 1/sqrt 2 along r = s") {
  SweepSpec spec;
  spec.axis1 = parse_axis_range("p[0,1,2]");
  spec.axis2 = parse_axis_range("r[1,5,5]");
  spec.r_equals_s = true;
  spec.outputs = {"p_min_nonlocal", "p_min_entangled_mapped"};
  const auto rows = data_rows(sweep_csv(spec));
  REQUIRE(rows.size() == 10);
  CHECK(std::abs(rows.back()[2] - 1 / std::sqrt(2.0)) < 1e-3);
  CHECK(std::abs(rows.back()[3] - 1.0 / 3) < 1e-3);
}

TEST_CASE("fidelity surface tends to p") {
  SweepSpec spec;
  spec.axis1 = parse_axis_range("p[0,1,6]");
  spec.axis2 = parse_axis_range("r[0,3,7]");
  spec.r_equals_s = true;
  spec.outputs = {"fidelity_w"};
  const auto rows = data_rows(sweep_csv(spec));
  REQUIRE(rows.size() == 42);
  for (const auto& row : rows) {
    if (row[1] == 3.0) CHECK(std::abs(row[2] - row[0]) < 0.01);
    if (row[1] == 0.0) CHECK(row[2] == doctest::Approx(0.5));
  }
}

TEST_CASE("eval report") {
  EvalOptions opt;
  std::ostringstream out;
  cmd_eval(WernerParams::make(0.5, 1, 1), opt, out);
  const std::string text = out.str();
  CHECK(text.find("entangled_ppt_direct: true  threshold=0 ") != std::string::npos);
  CHECK(text.find("entangled_ppt_mapped: true  threshold=0.325242445973") != std::string::npos);
  CHECK(text.find("nonlocal: false") != std::string::npos);
  CHECK(text.find("squeezed: false") != std::string::npos);
  CHECK(text.find("F_W=0.545392124392") != std::string::npos);
  CHECK(text.find("n_max: 44") != std::string::npos);

  std::ostringstream product;
  cmd_eval(WernerParams::make(0, 1, 1), opt, product);
  for (const char* line : {"entangled_ppt_direct: false", "entangled_ppt_mapped: false", "nonlocal: false",
                           "separable_sufficient: true"})
    CHECK(product.str().find(line) != std::string::npos);

  std::ostringstream vacuum;
  cmd_eval(WernerParams::make(1, 0, 0), opt, vacuum);
  CHECK(vacuum.str().find("separable_sufficient: true") != std::string::npos);
  CHECK(vacuum.str().find("F_W=0.5 ") != std::string::npos);

  opt.criteria = {"bogus"};
  CHECK_THROWS_AS(cmd_eval(WernerParams::make(0.5, 1, 1), opt, out), UsageError);
}

TEST_CASE("validate catches a corrupted closed-form 4x4") {
  ValidationOptions opt;
  opt.closed_form_rho4 = [](const WernerParams& w) {
    Matrix4c m = closed_form_rho4(w);
    m(0, 3) *= 1.01;
    m(3, 0) *= 1.01;
    return m;
  };
  std::ostringstream out;
  CHECK(cmd_validate(2, opt, out) != 0);
  CHECK(out.str().find("FAIL qubit_map") != std::string::npos);
  CHECK(out.str().find("PASS ppt_spectrum") != std::string::npos);
}

TEST_CASE("config files") {
  const auto path = std::filesystem::temp_directory_path() / "cvwerner_test.conf";
  {
    std::ofstream f(path);
    f << "# comment\n  p = 0.25 # trailing\n\nr=1\n";
  }
  const auto cfg = read_config(path.string());
  CHECK(cfg.at("p") == "0.25");
  CHECK(cfg.at("r") == "1");
  {
    std::ofstream f(path);
    f << "no equals sign\n";
  }
  CHECK_THROWS_AS(read_config(path.string()), UsageError);
  CHECK_THROWS_AS(read_config("/nonexistent/cvwerner.conf"), UsageError);
}

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3) == "0.333333333333");
  CHECK(format_real(1e-10) == "1e-10");
}

TEST_CASE("command-line tool") {
  auto ev = run_tool("eval p=0.5 r=1 s=1 --criteria entangled_ppt_mapped,fidelity");
  CHECK(ev.status == 0);
  CHECK(ev.out.find("entangled_ppt_mapped: true") != std::string::npos);

  auto usage = run_tool("eval p=1.5 r=1 s=1");
  CHECK(usage.status == 2);
  CHECK(usage.out.find("p must satisfy") != std::string::npos);

  CHECK(run_tool("eval p=0.5 r=1").status == 2);
  CHECK(run_tool("frobnicate").status != 0);

  const auto dir = std::filesystem::temp_directory_path();
  const auto conf = dir / "cvwerner_tool.conf";
  {
    std::ofstream f(conf);
    f << "axis1=r[0.5,1,3]\naxis2=s[0.5,1,3]\noutputs=p_max_separable\ntail_bound=1e-6\n";
  }
  const auto a = dir / "cvwerner_a.csv", b = dir / "cvwerner_b.csv";
  CHECK(run_tool("sweep --config " + conf.string() + " --output " + a.string()).status == 0);
  CHECK(run_tool("sweep --config " + conf.string() + " --tail-bound 1e-10 --output " + b.string()).status == 0);
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str().find("# tail_bound=1e-06") != std::string::npos);
  CHECK(sb.str().find("# tail_bound=1e-10") != std::string::npos);
  CHECK(data_rows(sa.str()).size() == 9);

  auto positional = run_tool("sweep axis1=r[0.5,1,3] axis2=s[0.5,1,3] outputs=p_max_separable --config " +
                             conf.string() + " --output " + b.string());
  CHECK(positional.status == 0);

  CHECK(run_tool("validate 1").status != 0);
}
