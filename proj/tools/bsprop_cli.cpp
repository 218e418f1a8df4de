// bsprop: run block-sparse proportionate NLMS experiments from the command line.
//
//   bsprop list-scenarios
//   bsprop show-scenario blocksparse_wgn > my.yaml
//   bsprop run my.yaml --out results/ [--seed N] [--stride N]
//   bsprop sweep --sizes 4,16,32,64 blocksparse_wgn --out sweep/
//   bsprop costs --L 1024 --P 16

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bsprop/harness.hpp"
#include "bsprop/scenario.hpp"

namespace {

using bsprop::Execution;
using bsprop::Scenario;

struct Overrides {
  std::string out_dir = "bsprop_out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> stride;
  bool serial = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--out", o.out_dir, "Output directory for CSV reports")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Override the scenario base_seed");
  cmd->add_option("--stride", o.stride, "Override the record stride (samples)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--serial", o.serial, "Use the serial reference execution path");
}

// A path that exists is read as a scenario file; otherwise the argument must
// name a built-in scenario.
Scenario resolve_scenario(const std::string& arg, const Overrides& o) {
  Scenario s = std::filesystem::exists(arg) ? bsprop::load_scenario(arg)
                                            : bsprop::builtin_scenario(arg);
  if (o.seed) s.base_seed = *o.seed;
  if (o.stride) s.record_stride = *o.stride;
  s.validate();
  return s;
}

void print_summary(const bsprop::RunReport& report, std::ostream& os) {
  os << "scenario " << report.scenario.name << ": " << report.scenario.runs << " run(s), "
     << report.scenario.total_samples << " samples, L=" << report.scenario.taps << '\n';
  for (const auto& t : report.timings) {
    const auto fmt = [](const std::optional<std::size_t>& v) {
      return v ? std::to_string(*v) : std::string("-");
    };
    os << "  " << t.label << " segment " << t.segment << " (from " << t.segment_start
       << "): t(-10dB)=" << fmt(t.time_to_minus10) << " t(-20dB)=" << fmt(t.time_to_minus20)
       << " final=" << t.final_db << " dB\n";
  }
  for (const auto& d : report.diagnostics) os << "  warning: run " << d.run << ": " << d.message << '\n';
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> sizes;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const auto comma = csv.find(',', pos);
    const auto token = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (token.empty()) throw CLI::ValidationError("--sizes", "empty group size");
    std::size_t used = 0;
    const auto value = std::stoul(token, &used);
    if (used != token.size()) throw CLI::ValidationError("--sizes", "bad group size '" + token + "'");
    sizes.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-sparse proportionate NLMS experiment harness"};
  app.require_subcommand(1);

  Overrides run_opts;
  std::string run_target;
  auto* run = app.add_subcommand("run", "Run a scenario file or built-in scenario");
  run->add_option("scenario", run_target, "Scenario file or built-in name")->required();
  add_overrides(run, run_opts);

  Overrides sweep_opts;
  std::string sweep_target;
  std::string sweep_sizes = "4,16,32,64";
  auto* sweep = app.add_subcommand("sweep", "Sweep the BS-PNLMS group size");
  sweep->add_option("--sizes", sweep_sizes, "Comma-separated group sizes")->capture_default_str();
  sweep->add_option("scenario", sweep_target, "Scenario file or built-in name")->required();
  add_overrides(sweep, sweep_opts);

  std::size_t cost_l = 1024;
  std::size_t cost_p = 16;
  auto* costs = app.add_subcommand("costs", "Print per-sample operation counts");
  costs->add_option("--L", cost_l, "Filter length")->capture_default_str()->check(CLI::PositiveNumber);
  costs->add_option("--P", cost_p, "Group size")->capture_default_str()->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");

  std::string show_name;
  auto* show = app.add_subcommand("show-scenario", "Print a built-in scenario as YAML");
  show->add_option("name", show_name, "Built-in scenario name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto scenario = resolve_scenario(run_target, run_opts);
      const auto report = bsprop::run_scenario(
          scenario, run_opts.serial ? Execution::kSerial : Execution::kParallel);
      bsprop::emit_report(report, run_opts.out_dir);
      print_summary(report, std::cout);
      std::cout << "wrote " << run_opts.out_dir << '\n';
    } else if (*sweep) {
      const auto scenario = resolve_scenario(sweep_target, sweep_opts);
      const auto report = bsprop::sweep_group_size(
          scenario, parse_sizes(sweep_sizes),
          sweep_opts.serial ? Execution::kSerial : Execution::kParallel);
      bsprop::emit_report(report, sweep_opts.out_dir);
      print_summary(report, std::cout);
      std::cout << "wrote " << sweep_opts.out_dir << '\n';
    } else if (*costs) {
      std::cout << bsprop::render_cost_table(cost_l, cost_p);
    } else if (*list) {
      for (const auto& name : bsprop::scenario_names()) std::cout << name << '\n';
    } else if (*show) {
      std::cout << bsprop::scenario_to_yaml(bsprop::builtin_scenario(show_name));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
