#include "bsprop/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bsprop/filters.hpp"
#include "bsprop/io.hpp"
#include "bsprop/random.hpp"
#include "bsprop/systems.hpp"

namespace bsprop {

RunSeeds derive_run_seeds(const Scenario& scenario, std::size_t run) {
  RunSeeds seeds;
  seeds.input = derive_seed(scenario.base_seed, run, "input");
  for (std::size_t k = 0; k < scenario.schedule.size(); ++k) {
    seeds.system.push_back(derive_seed(scenario.base_seed, run, "system", k));
    seeds.noise.push_back(derive_seed(scenario.base_seed, run, "noise", k));
  }
  return seeds;
}

namespace {

ImpulseResponse build_system(const SystemSpec& spec, std::size_t taps, std::uint64_t seed) {
  switch (spec.kind) {
    case SystemKind::kBlockSparse:
      return make_block_sparse_ir(taps, spec.clusters, seed);
    case SystemKind::kDispersive:
      return make_dispersive_ir(taps, seed);
    case SystemKind::kQuasiSparseEcho:
      return make_quasi_sparse_echo_ir(taps, spec.delay, spec.decay_time, seed);
    case SystemKind::kFile: {
      auto ir = ir_from_file(spec.path);
      if (ir.length() != taps)
        throw std::invalid_argument("impulse response '" + spec.path + "' has " +
                                    std::to_string(ir.length()) + " taps, scenario expects " +
                                    std::to_string(taps));
      return ir;
    }
  }
  throw std::invalid_argument("unknown system kind");
}

SignalBuffer build_input(const InputSpec& spec, std::size_t total, std::uint64_t seed) {
  switch (spec.kind) {
    case InputKind::kWgn:
      return gen_wgn(total, seed);
    case InputKind::kAr1:
      return color_ar1(gen_wgn(total, seed), spec.pole);
    case InputKind::kSpeech: {
      auto speech = load_speech(spec.path);
      if (speech.size() < total)
        throw std::invalid_argument("speech file '" + spec.path + "' holds " +
                                    std::to_string(speech.size()) + " samples, scenario needs " +
                                    std::to_string(total));
      speech.samples.resize(total);
      return speech;
    }
  }
  throw std::invalid_argument("unknown input kind");
}

}  // namespace

RunData generate_run_data(const Scenario& scenario, std::size_t run, Execution execution) {
  const auto seeds = derive_run_seeds(scenario, run);
  RunData data;
  data.input = build_input(scenario.input, scenario.total_samples, seeds.input);
  for (std::size_t k = 0; k < scenario.schedule.size(); ++k) {
    data.schedule.segments.push_back(
        {scenario.schedule[k].start,
         build_system(scenario.schedule[k].system, scenario.taps, seeds.system[k])});
  }
  data.desired = synthesize_desired(data.input, data.schedule, execution);

  if (std::isfinite(scenario.snr_db)) {
    // Noise power follows each segment's own echo power.
    for (std::size_t k = 0; k < data.schedule.segments.size(); ++k) {
      const std::size_t begin = data.schedule.segments[k].start;
      const std::size_t end = data.schedule.segment_end(k, scenario.total_samples);
      if (begin >= end) continue;
      SignalBuffer clean{std::vector<double>(data.desired.samples.begin() + begin,
                                             data.desired.samples.begin() + end),
                         data.desired.sample_rate};
      const auto noisy = add_noise_snr(clean, scenario.snr_db, seeds.noise[k]);
      std::copy(noisy.samples.begin(), noisy.samples.end(), data.desired.samples.begin() + begin);
    }
  }
  return data;
}

std::optional<MisalignmentCurve> run_algorithm(const Scenario& scenario,
                                               const AlgorithmSpec& spec,
                                               const RunData& data, Diagnostic* diagnostic) {
  const std::size_t total = scenario.total_samples;
  const std::size_t stride = scenario.record_stride;
  AdaptiveFilter filter(spec.config(scenario.taps));
  MisalignmentCurve curve;
  curve.record_stride = stride;
  curve.values_db.reserve((total + stride - 1) / stride);

  const auto& segments = data.schedule.segments;
  std::size_t active = 0;
  const auto fail = [&](std::size_t n, const std::string& what) {
    if (diagnostic) {
      diagnostic->algorithm = spec.display_label();
      diagnostic->sample = n;
      diagnostic->message = spec.display_label() + " diverged at sample " +
                            std::to_string(n) + ": " + what;
    }
    return std::nullopt;
  };

  for (std::size_t n = 0; n < total; ++n) {
    while (active + 1 < segments.size() && segments[active + 1].start <= n) ++active;
    const auto step = filter.adapt(data.input.samples[n], data.desired.samples[n]);
    // Any non-finite tap makes the next a priori error non-finite.
    if (!std::isfinite(step.error)) return fail(n, "non-finite error");
    if (n % stride == 0) {
      const double mis = normalized_misalignment_db(segments[active].ir.taps,
                                                    filter.coefficients());
      if (!std::isfinite(mis)) return fail(n, "non-finite coefficients");
      curve.values_db.push_back(mis);
    }
  }
  for (double h : filter.coefficients()) {
    if (!std::isfinite(h)) return fail(total, "non-finite coefficients");
  }
  return curve;
}

namespace {

std::vector<SegmentTiming> compute_timings(const RunReport& report) {
  std::vector<SegmentTiming> timings;
  const auto& s = report.scenario;
  for (const auto& r : report.results) {
    for (std::size_t k = 0; k < s.schedule.size(); ++k) {
      const auto curve = report.segment_curve(r.label, k);
      SegmentTiming t;
      t.label = r.label;
      t.segment = k;
      t.segment_start = s.schedule[k].start;
      if (curve.size() > 0) {
        t.time_to_minus10 = time_to_threshold(curve, -10.0);
        t.time_to_minus20 = time_to_threshold(curve, -20.0);
        t.final_db = curve.values_db.back();
      } else {
        t.final_db = std::numeric_limits<double>::quiet_NaN();
      }
      timings.push_back(std::move(t));
    }
  }
  return timings;
}

}  // namespace

const AlgorithmResult& RunReport::result(const std::string& label) const {
  for (const auto& r : results) {
    if (r.label == label) return r;
  }
  throw std::out_of_range("no algorithm labelled '" + label + "' in report");
}

MisalignmentCurve RunReport::segment_curve(const std::string& label, std::size_t segment) const {
  if (segment >= scenario.schedule.size()) throw std::out_of_range("segment index out of range");
  const std::size_t begin = scenario.schedule[segment].start;
  const std::size_t end = segment + 1 < scenario.schedule.size()
                              ? scenario.schedule[segment + 1].start
                              : scenario.total_samples;
  return slice_samples(result(label).curve, begin, end);
}

RunReport run_scenario(const Scenario& scenario, Execution execution) {
  scenario.validate();
  const std::size_t runs = scenario.runs;
  const std::size_t algs = scenario.algorithms.size();

  RunReport report;
  report.scenario = scenario;
  for (std::size_t r = 0; r < runs; ++r) report.seeds.push_back(derive_run_seeds(scenario, r));

  // Data generation throws on bad input (missing files, silent segments);
  // exceptions must not escape an OpenMP region, so they are captured per
  // slot and rethrown in run order.
  std::vector<RunData> data(runs);
  std::vector<std::exception_ptr> data_errors(runs);
  const auto make_data = [&](std::size_t r, Execution inner) {
    try {
      data[r] = generate_run_data(scenario, r, inner);
    } catch (...) {
      data_errors[r] = std::current_exception();
    }
  };
  if (execution == Execution::kParallel) {
    const auto count = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < count; ++r)
      make_data(static_cast<std::size_t>(r), Execution::kSerial);
  } else {
    for (std::size_t r = 0; r < runs; ++r) make_data(r, Execution::kSerial);
  }
  for (const auto& e : data_errors) {
    if (e) std::rethrow_exception(e);
  }

  // One job per (run, algorithm); results land in fixed slots.
  const std::size_t jobs = runs * algs;
  std::vector<std::optional<MisalignmentCurve>> curves(jobs);
  std::vector<Diagnostic> job_diags(jobs);
  std::vector<std::exception_ptr> job_errors(jobs);
  const auto do_job = [&](std::size_t j) {
    const std::size_t r = j / algs;
    const std::size_t a = j % algs;
    try {
      job_diags[j].run = r;
      curves[j] = run_algorithm(scenario, scenario.algorithms[a], data[r], &job_diags[j]);
    } catch (...) {
      job_errors[j] = std::current_exception();
    }
  };
  if (execution == Execution::kParallel) {
    const auto count = static_cast<std::ptrdiff_t>(jobs);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t j = 0; j < count; ++j) do_job(static_cast<std::size_t>(j));
  } else {
    for (std::size_t j = 0; j < jobs; ++j) do_job(j);
  }
  for (const auto& e : job_errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::size_t records = (scenario.total_samples + scenario.record_stride - 1) /
                              scenario.record_stride;
  for (std::size_t a = 0; a < algs; ++a) {
    const auto& spec = scenario.algorithms[a];
    AlgorithmResult result;
    result.label = spec.display_label();
    result.spec = spec;
    std::vector<MisalignmentCurve> finite;
    for (std::size_t r = 0; r < runs; ++r) {
      const std::size_t j = r * algs + a;
      if (curves[j]) {
        finite.push_back(std::move(*curves[j]));
      } else {
        ++result.diverged_runs;
        report.diagnostics.push_back(job_diags[j]);
      }
    }
    if (finite.empty()) {
      result.curve.record_stride = scenario.record_stride;
      result.curve.runs_averaged = 0;
      result.curve.values_db.assign(records, std::numeric_limits<double>::quiet_NaN());
    } else {
      result.curve = average_runs(finite);
    }
    report.results.push_back(std::move(result));
    report.costs.emplace_back(spec.display_label(),
                              predicted_costs(spec.kind, scenario.taps, spec.group_size));
  }
  report.timings = compute_timings(report);
  return report;
}

RunReport sweep_group_size(const Scenario& scenario, const std::vector<std::size_t>& sizes,
                           Execution execution) {
  const auto base = std::find_if(scenario.algorithms.begin(), scenario.algorithms.end(),
                                 [](const AlgorithmSpec& a) { return a.kind == Algorithm::kBsPnlms; });
  if (base == scenario.algorithms.end())
    throw std::invalid_argument("sweep: scenario '" + scenario.name + "' has no BS_PNLMS entry");
  if (sizes.empty()) throw std::invalid_argument("sweep: no group sizes given");
  for (std::size_t p : sizes) {
    if (p == 0 || scenario.taps % p != 0)
      throw std::invalid_argument("sweep: group size " + std::to_string(p) +
                                  " does not divide L=" + std::to_string(scenario.taps));
  }

  std::vector<std::size_t> order{1};
  for (std::size_t p : sizes) order.push_back(p);
  order.push_back(scenario.taps);

  Scenario swept = scenario;
  swept.name = scenario.name + "_sweep";
  swept.algorithms.clear();
  for (std::size_t p : order) {
    const bool seen = std::any_of(swept.algorithms.begin(), swept.algorithms.end(),
                                  [p](const AlgorithmSpec& a) { return a.group_size == p; });
    if (seen) continue;
    AlgorithmSpec clone = *base;
    clone.label.clear();
    clone.group_size = p;
    swept.algorithms.push_back(clone);
  }
  return run_scenario(swept, execution);
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string optional_field(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string curves_csv(const RunReport& report) {
  std::string out = "sample";
  for (const auto& r : report.results) out += "," + r.label;
  out += '\n';
  const std::size_t records = report.results.empty() ? 0 : report.results.front().curve.size();
  const std::size_t stride = report.scenario.record_stride;
  for (std::size_t k = 0; k < records; ++k) {
    out += std::to_string(k * stride);
    for (const auto& r : report.results) {
      out += ',';
      out += format_double(r.curve.values_db[k]);
    }
    out += '\n';
  }
  return out;
}

std::string summary_csv(const RunReport& report) {
  std::string out = "algorithm,time_to_-10dB,time_to_-20dB,final_db\n";
  for (const auto& r : report.results) {
    out += r.label + "," + optional_field(time_to_threshold(r.curve, -10.0)) + "," +
           optional_field(time_to_threshold(r.curve, -20.0)) + "," +
           format_double(r.curve.size() ? r.curve.values_db.back()
                                        : std::numeric_limits<double>::quiet_NaN()) +
           "\n";
  }
  return out;
}

std::string segments_csv(const RunReport& report) {
  std::string out = "algorithm,segment,segment_start,time_to_-10dB,time_to_-20dB,final_db\n";
  for (const auto& t : report.timings) {
    out += t.label + "," + std::to_string(t.segment) + "," + std::to_string(t.segment_start) +
           "," + optional_field(t.time_to_minus10) + "," + optional_field(t.time_to_minus20) +
           "," + format_double(t.final_db) + "\n";
  }
  return out;
}

std::string costs_csv(const RunReport& report) {
  std::string out =
      "algorithm,additions,multiplications,divisions,comparisons,square_roots,memory_words\n";
  for (const auto& [label, c] : report.costs) {
    out += label + "," + std::to_string(c.additions) + "," + std::to_string(c.multiplications) +
           "," + std::to_string(c.divisions) + "," + std::to_string(c.comparisons) + "," +
           std::to_string(c.square_roots) + "," + std::to_string(c.memory_words) + "\n";
  }
  return out;
}

std::string scenario_txt(const RunReport& report) {
  std::string out = scenario_to_yaml(report.scenario);
  out += "# derived seeds\n";
  for (std::size_t r = 0; r < report.seeds.size(); ++r) {
    const auto& s = report.seeds[r];
    out += "# run " + std::to_string(r) + ": input=" + std::to_string(s.input);
    for (std::size_t k = 0; k < s.system.size(); ++k) {
      out += " system[" + std::to_string(k) + "]=" + std::to_string(s.system[k]) + " noise[" +
             std::to_string(k) + "]=" + std::to_string(s.noise[k]);
    }
    out += '\n';
  }
  return out;
}

std::string diagnostics_txt(const RunReport& report) {
  std::string out;
  for (const auto& d : report.diagnostics)
    out += "run " + std::to_string(d.run) + ": " + d.message + "\n";
  return out;
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());
  const std::vector<std::pair<std::string, std::string>> files = {
      {"curves.csv", curves_csv(report)},       {"summary.csv", summary_csv(report)},
      {"segments.csv", segments_csv(report)},   {"costs.csv", costs_csv(report)},
      {"scenario.txt", scenario_txt(report)},   {"diagnostics.txt", diagnostics_txt(report)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, contents] : files) {
    const auto path = out_dir / name;
    write_file(path, contents);
    written.push_back(path);
  }
  return written;
}

std::string render_cost_table(std::size_t length, std::size_t group_size) {
  std::ostringstream out;
  const auto row = [&out](const std::string& name, const auto& a, const auto& m, const auto& d,
                          const auto& c, const auto& s, const auto& mw) {
    out.width(11);
    out << std::left << name;
    for (const auto& v : {a, m, d, c, s, mw}) {
      out.width(10);
      out << std::right << v;
    }
    out << '\n';
  };
  out << "L=" << length << " P=" << group_size << " N=" << length / group_size << '\n';
  row(std::string("algorithm"), std::string("A"), std::string("M"), std::string("D"),
      std::string("C"), std::string("Sqrt"), std::string("MW"));
  for (auto alg : {Algorithm::kNlms, Algorithm::kPnlms, Algorithm::kBsPnlms, Algorithm::kIpnlms,
                   Algorithm::kBsIpnlms}) {
    const auto c = predicted_costs(alg, length, group_size);
    row(std::string(to_string(alg)), c.additions, c.multiplications, c.divisions, c.comparisons,
        c.square_roots, c.memory_words);
  }
  return out.str();
}

}  // namespace bsprop
