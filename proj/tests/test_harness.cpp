#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "bsprop/harness.hpp"

using namespace bsprop;

namespace {

Scenario small_scenario() {
  Scenario s;
  s.name = "small";
  s.taps = 32;
  s.total_samples = 4000;
  s.input = {InputKind::kAr1, 0.8, ""};
  s.schedule = {{0, {SystemKind::kBlockSparse, {{5, 8}}}},
                {2000, {SystemKind::kBlockSparse, {{3, 4}, {17, 8}}}}};
  s.snr_db = 30.0;
  s.runs = 3;
  s.base_seed = 11;
  s.record_stride = 10;
  const double mu = 0.2, delta = 0.01 / 32;
  s.algorithms = {
      {.kind = Algorithm::kNlms, .step_size = mu, .regularization = 0.01},
      {.kind = Algorithm::kPnlms, .step_size = mu, .regularization = delta},
      {.kind = Algorithm::kIpnlms, .step_size = mu, .regularization = delta},
      {.kind = Algorithm::kBsPnlms, .step_size = mu, .regularization = delta, .group_size = 4},
      {.kind = Algorithm::kBsIpnlms, .step_size = mu, .regularization = delta, .group_size = 4},
  };
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("NLMS identifies an identity path exactly") {
  Scenario s;
  s.taps = 16;
  s.total_samples = 200;
  s.schedule = {{0, {SystemKind::kBlockSparse, {{1, 1}}}}};
  s.snr_db = std::numeric_limits<double>::infinity();
  s.record_stride = 1;
  s.algorithms = {{.kind = Algorithm::kNlms, .step_size = 1.0, .regularization = 0.0}};
  const auto report = run_scenario(s);
  const auto& curve = report.results.at(0).curve;
  for (std::size_t k = s.taps; k < curve.size(); ++k) CHECK(curve.values_db[k] < -100.0);
}

TEST_CASE("run data") {
  const auto s = small_scenario();
  const auto a = generate_run_data(s, 0);
  const auto b = generate_run_data(s, 0, Execution::kSerial);
  CHECK(a.input.samples == b.input.samples);
  CHECK(a.desired.samples == b.desired.samples);
  CHECK(a.schedule.segments.size() == 2);
  CHECK(generate_run_data(s, 1).input.samples != a.input.samples);

  const auto seeds = derive_run_seeds(s, 0);
  CHECK(seeds.system.size() == 2);
  CHECK(seeds.noise.size() == 2);
  CHECK(seeds.system[0] != seeds.system[1]);
  CHECK(derive_run_seeds(s, 1).input != seeds.input);
}

TEST_CASE("reports are deterministic and match the serial reference") {
  const auto s = small_scenario();
  const auto par = run_scenario(s);
  const auto again = run_scenario(s);
  const auto ser = run_scenario(s, Execution::kSerial);
  REQUIRE(par.results.size() == 5);
  for (std::size_t i = 0; i < par.results.size(); ++i) {
    CHECK(par.results[i].curve.values_db == again.results[i].curve.values_db);
    CHECK(par.results[i].curve.values_db == ser.results[i].curve.values_db);
    CHECK(par.results[i].curve.size() == s.total_samples / s.record_stride);
    CHECK(par.results[i].curve.runs_averaged == 3);
  }
  CHECK(par.timings.size() == 10);
  CHECK(par.costs.size() == 5);
  CHECK(par.diagnostics.empty());
  CHECK(par.results.back().curve.values_db.back() < -20.0);
  CHECK(par.segment_curve("NLMS", 1).size() == 200);
  CHECK_THROWS_AS(par.result("missing"), std::out_of_range);
}

TEST_CASE("BS-PNLMS with unit groups reproduces PNLMS") {
  auto s = small_scenario();
  s.algorithms = {{.kind = Algorithm::kPnlms, .step_size = 0.2, .regularization = 0.001},
                  {.kind = Algorithm::kBsPnlms, .step_size = 0.2, .regularization = 0.001, .group_size = 1}};
  const auto r = run_scenario(s);
  const auto& a = r.results[0].curve.values_db;
  const auto& b = r.results[1].curve.values_db;
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12);
}

TEST_CASE("divergence is reported, not averaged") {
  auto s = small_scenario();
  s.algorithms = {{.kind = Algorithm::kNlms, .step_size = 1e300, .regularization = 0.0}};
  s.runs = 2;
  const auto r = run_scenario(s);
  CHECK(r.results[0].diverged_runs == 2);
  CHECK(std::isnan(r.results[0].curve.values_db.back()));
  CHECK(r.diagnostics.size() == 2);
}

TEST_CASE("group-size sweep") {
  auto s = small_scenario();
  s.runs = 1;
  const auto r = sweep_group_size(s, {4, 8});
  std::vector<std::string> labels;
  for (const auto& res : r.results) labels.push_back(res.label);
  CHECK(labels == std::vector<std::string>{"BS-PNLMS(P=1)", "BS-PNLMS(P=4)", "BS-PNLMS(P=8)", "BS-PNLMS(P=32)"});
  CHECK(sweep_group_size(s, {1}).results.size() == 2);
  CHECK_THROWS_AS(sweep_group_size(s, {7}), std::invalid_argument);

  s.algorithms.erase(s.algorithms.begin() + 3);
  CHECK_THROWS_AS(sweep_group_size(s, {4}), std::invalid_argument);
}

TEST_CASE("report files") {
  auto s = small_scenario();
  s.runs = 1;
  const auto report = run_scenario(s);
  const auto dir = std::filesystem::temp_directory_path() / "bsprop_test_harness_out";
  std::filesystem::remove_all(dir);

  const auto written = emit_report(report, dir);
  CHECK(written.size() == 6);
  const auto curves = slurp(dir / "curves.csv");
  CHECK(count_lines(curves) == 1 + s.total_samples / s.record_stride);
  CHECK(curves.rfind("sample,NLMS,PNLMS,IPNLMS,BS-PNLMS(P=4),BS-IPNLMS(P=4)\n", 0) == 0);
  const auto summary = slurp(dir / "summary.csv");
  CHECK(summary.rfind("algorithm,time_to_-10dB,time_to_-20dB,final_db\n", 0) == 0);
  CHECK(count_lines(summary) == 6);

  const auto other = std::filesystem::temp_directory_path() / "bsprop_test_harness_out2";
  emit_report(run_scenario(s), other);
  for (const auto& p : written) CHECK(slurp(p) == slurp(other / p.filename()));

  std::ofstream(dir / "blocker") << "x";
  CHECK_THROWS_AS(emit_report(report, dir / "blocker" / "sub"), std::runtime_error);

  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(other);
}

TEST_CASE("cost table") {
  const auto table = render_cost_table(1024, 16);
  CHECK(table.find("BS_IPNLMS") != std::string::npos);
  CHECK(table.find("4159") != std::string::npos);
  CHECK(table.find("5323") != std::string::npos);
}
