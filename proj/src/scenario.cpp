#include "bsprop/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bsprop/io.hpp"

namespace bsprop {

// ---------------------------------------------------------------------------
// Types

FilterConfig AlgorithmSpec::config(std::size_t taps) const {
  FilterConfig c;
  c.length = taps;
  c.step_size = step_size;
  c.regularization = regularization;
  c.algorithm = kind;
  c.rho = rho;
  c.q = q;
  c.alpha = alpha;
  c.group_size = group_size;
  return c;
}

std::string AlgorithmSpec::display_label() const {
  if (!label.empty()) return label;
  switch (kind) {
    case Algorithm::kNlms: return "NLMS";
    case Algorithm::kPnlms: return "PNLMS";
    case Algorithm::kIpnlms: return "IPNLMS";
    case Algorithm::kBsPnlms: return "BS-PNLMS(P=" + std::to_string(group_size) + ")";
    case Algorithm::kBsIpnlms: return "BS-IPNLMS(P=" + std::to_string(group_size) + ")";
  }
  return "?";
}

void Scenario::validate() const {
  const auto bad = [this](const std::string& why) {
    return std::invalid_argument("scenario '" + name + "': " + why);
  };
  if (taps == 0) throw bad("taps must be >= 1");
  if (total_samples == 0) throw bad("total_samples must be >= 1");
  if (runs == 0) throw bad("runs must be >= 1");
  if (record_stride == 0) throw bad("record_stride must be >= 1");
  if (std::isnan(snr_db)) throw bad("snr_db is NaN");
  if (input.kind == InputKind::kAr1 && !(std::abs(input.pole) < 1.0))
    throw bad("input pole must satisfy |pole| < 1");
  if (input.kind == InputKind::kSpeech && input.path.empty())
    throw bad("speech input needs a path");
  if (schedule.empty()) throw bad("schedule is empty");
  if (schedule.front().start != 0) throw bad("schedule must start at sample 0");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const auto& seg = schedule[k];
    if (k > 0 && seg.start <= schedule[k - 1].start)
      throw bad("schedule starts must be strictly increasing");
    if (seg.start % record_stride != 0)
      throw bad("switch sample " + std::to_string(seg.start) +
                " is not a multiple of record_stride");
    if (seg.system.kind == SystemKind::kBlockSparse && seg.system.clusters.empty())
      throw bad("block_sparse system needs clusters");
    if (seg.system.kind == SystemKind::kQuasiSparseEcho && seg.system.delay >= taps)
      throw bad("quasi_sparse_echo delay must be below taps");
    if (seg.system.kind == SystemKind::kFile && seg.system.path.empty())
      throw bad("file system needs a path");
  }
  if (algorithms.empty()) throw bad("no algorithms");
  std::set<std::string> labels;
  for (const auto& a : algorithms) {
    const auto label = a.display_label();
    if (label.find_first_of(",\n\r\"") != std::string::npos)
      throw bad("label '" + label + "' contains a CSV delimiter");
    if (!labels.insert(label).second) throw bad("duplicate algorithm label '" + label + "'");
    try {
      a.config(taps).validate();
    } catch (const std::invalid_argument& e) {
      throw bad(label + ": " + e.what());
    }
  }
}

std::vector<std::size_t> Scenario::switch_samples() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k < schedule.size(); ++k) out.push_back(schedule[k].start);
  return out;
}

// ---------------------------------------------------------------------------
// Built-in scenarios

std::vector<std::string> scenario_names() {
  return {"blocksparse_wgn", "blocksparse_ar1", "dispersive_wgn", "dispersive_ar1"};
}

namespace {

constexpr double kNlmsRegularization = 0.01;
constexpr std::size_t kSwitchSample = 40000;
constexpr std::size_t kTotalSamples = 80000;

std::vector<AlgorithmSpec> standard_algorithms(std::size_t taps, double mu,
                                            std::size_t bs_pnlms_p,
                                            std::size_t bs_ipnlms_p) {
  const double delta = kNlmsRegularization / static_cast<double>(taps);
  AlgorithmSpec nlms{.kind = Algorithm::kNlms, .step_size = mu,
                     .regularization = kNlmsRegularization};
  AlgorithmSpec pnlms{.kind = Algorithm::kPnlms, .step_size = mu, .regularization = delta};
  AlgorithmSpec ipnlms{.kind = Algorithm::kIpnlms, .step_size = mu, .regularization = delta};
  AlgorithmSpec bs_pnlms{.kind = Algorithm::kBsPnlms, .step_size = mu,
                         .regularization = delta, .group_size = bs_pnlms_p};
  AlgorithmSpec bs_ipnlms{.kind = Algorithm::kBsIpnlms, .step_size = mu,
                          .regularization = delta, .group_size = bs_ipnlms_p};
  return {nlms, pnlms, ipnlms, bs_pnlms, bs_ipnlms};
}

}  // namespace

Scenario builtin_scenario(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  s.total_samples = kTotalSamples;
  s.snr_db = 30.0;
  s.runs = 5;
  s.base_seed = 1;
  s.record_stride = 10;

  const bool blocksparse = name == "blocksparse_wgn" || name == "blocksparse_ar1";
  const bool dispersive = name == "dispersive_wgn" || name == "dispersive_ar1";
  if (!blocksparse && !dispersive)
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
  const bool colored = name.ends_with("_ar1");
  s.input = colored ? InputSpec{InputKind::kAr1, 0.8, {}} : InputSpec{InputKind::kWgn, 0.8, {}};

  if (blocksparse) {
    s.taps = 1024;
    SystemSpec one{.kind = SystemKind::kBlockSparse, .clusters = {{257, 32}}};
    SystemSpec two{.kind = SystemKind::kBlockSparse, .clusters = {{257, 16}, {769, 32}}};
    s.schedule = {{0, one}, {kSwitchSample, two}};
    s.algorithms = standard_algorithms(s.taps, colored ? 0.2 : 0.1, 16, 4);
  } else {
    s.taps = 512;
    SystemSpec echo{.kind = SystemKind::kQuasiSparseEcho, .delay = 32, .decay_time = 64.0};
    SystemSpec random{.kind = SystemKind::kDispersive};
    s.schedule = {{0, echo}, {kSwitchSample, random}};
    s.algorithms = standard_algorithms(s.taps, colored ? 0.4 : 0.2, 16, 16);
  }
  return s;
}

// ---------------------------------------------------------------------------
// YAML

namespace {

std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.is_null()) return "";
  return " (line " + std::to_string(mark.line + 1) + ")";
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                const std::string& context) {
  if (!node.IsMap()) throw std::invalid_argument(context + " must be a mapping" + where(node));
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw std::invalid_argument("unknown key '" + key + "' in " + context + where(kv.first));
  }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& context) {
  const auto value = node[key];
  if (!value) throw std::invalid_argument(context + ": missing '" + key + "'" + where(node));
  try {
    return value.as<T>();
  } catch (const YAML::Exception&) {
    throw std::invalid_argument(context + ": bad value for '" + key + "'" + where(value));
  }
}

template <typename T>
T get_or(const YAML::Node& node, const std::string& key, T fallback,
         const std::string& context) {
  if (!node[key]) return fallback;
  return get<T>(node, key, context);
}

InputSpec parse_input(const YAML::Node& node) {
  check_keys(node, {"kind", "pole", "path"}, "input");
  InputSpec in;
  const auto kind = get<std::string>(node, "kind", "input");
  if (kind == "wgn") {
    in.kind = InputKind::kWgn;
  } else if (kind == "ar1") {
    in.kind = InputKind::kAr1;
  } else if (kind == "speech") {
    in.kind = InputKind::kSpeech;
  } else {
    throw std::invalid_argument("input: unknown kind '" + kind + "'");
  }
  in.pole = get_or<double>(node, "pole", in.pole, "input");
  in.path = get_or<std::string>(node, "path", "", "input");
  return in;
}

SystemSpec parse_system(const YAML::Node& node) {
  check_keys(node, {"kind", "clusters", "delay", "decay_time", "path"}, "system");
  SystemSpec sys;
  const auto kind = get<std::string>(node, "kind", "system");
  if (kind == "block_sparse") {
    sys.kind = SystemKind::kBlockSparse;
  } else if (kind == "dispersive") {
    sys.kind = SystemKind::kDispersive;
  } else if (kind == "quasi_sparse_echo") {
    sys.kind = SystemKind::kQuasiSparseEcho;
  } else if (kind == "file") {
    sys.kind = SystemKind::kFile;
  } else {
    throw std::invalid_argument("system: unknown kind '" + kind + "'");
  }
  if (const auto clusters = node["clusters"]) {
    if (!clusters.IsSequence()) throw std::invalid_argument("system.clusters must be a list");
    for (const auto& c : clusters) {
      if (!c.IsSequence() || c.size() != 2)
        throw std::invalid_argument("each cluster must be [start, length]" + where(c));
      sys.clusters.push_back({c[0].as<std::size_t>(), c[1].as<std::size_t>()});
    }
  }
  sys.delay = get_or<std::size_t>(node, "delay", sys.delay, "system");
  sys.decay_time = get_or<double>(node, "decay_time", sys.decay_time, "system");
  sys.path = get_or<std::string>(node, "path", "", "system");
  return sys;
}

AlgorithmSpec parse_algorithm(const YAML::Node& node) {
  check_keys(node, {"kind", "label", "mu", "delta", "rho", "q", "alpha", "P"}, "algorithm");
  AlgorithmSpec a;
  a.kind = algorithm_from_string(get<std::string>(node, "kind", "algorithm"));
  a.label = get_or<std::string>(node, "label", "", "algorithm");
  a.step_size = get<double>(node, "mu", "algorithm");
  a.regularization = get<double>(node, "delta", "algorithm");
  a.rho = get_or<double>(node, "rho", a.rho, "algorithm");
  a.q = get_or<double>(node, "q", a.q, "algorithm");
  a.alpha = get_or<double>(node, "alpha", a.alpha, "algorithm");
  a.group_size = get_or<std::size_t>(node, "P", a.group_size, "algorithm");
  return a;
}

std::string yaml_double(double v) {
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  if (std::isnan(v)) return ".nan";
  return format_double(v);
}

std::string_view input_kind_name(InputKind k) {
  switch (k) {
    case InputKind::kWgn: return "wgn";
    case InputKind::kAr1: return "ar1";
    case InputKind::kSpeech: return "speech";
  }
  return "?";
}

std::string_view system_kind_name(SystemKind k) {
  switch (k) {
    case SystemKind::kBlockSparse: return "block_sparse";
    case SystemKind::kDispersive: return "dispersive";
    case SystemKind::kQuasiSparseEcho: return "quasi_sparse_echo";
    case SystemKind::kFile: return "file";
  }
  return "?";
}

}  // namespace

Scenario parse_scenario(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("scenario YAML: ") + e.what());
  }
  check_keys(root,
             {"name", "taps", "total_samples", "input", "schedule", "snr_db", "runs",
              "base_seed", "record_stride", "algorithms"},
             "scenario");
  Scenario s;
  s.name = get_or<std::string>(root, "name", s.name, "scenario");
  s.taps = get<std::size_t>(root, "taps", "scenario");
  s.total_samples = get<std::size_t>(root, "total_samples", "scenario");
  if (!root["input"]) throw std::invalid_argument("scenario: missing 'input'");
  s.input = parse_input(root["input"]);
  const auto schedule = root["schedule"];
  if (!schedule || !schedule.IsSequence())
    throw std::invalid_argument("scenario: 'schedule' must be a list");
  for (const auto& entry : schedule) {
    check_keys(entry, {"start", "system"}, "schedule entry");
    if (!entry["system"]) throw std::invalid_argument("schedule entry: missing 'system'");
    s.schedule.push_back({get<std::size_t>(entry, "start", "schedule entry"),
                          parse_system(entry["system"])});
  }
  s.snr_db = get<double>(root, "snr_db", "scenario");
  s.runs = get_or<std::size_t>(root, "runs", s.runs, "scenario");
  s.base_seed = get_or<std::uint64_t>(root, "base_seed", s.base_seed, "scenario");
  s.record_stride = get_or<std::size_t>(root, "record_stride", s.record_stride, "scenario");
  const auto algorithms = root["algorithms"];
  if (!algorithms || !algorithms.IsSequence())
    throw std::invalid_argument("scenario: 'algorithms' must be a list");
  for (const auto& a : algorithms) s.algorithms.push_back(parse_algorithm(a));
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string scenario_to_yaml(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "taps" << YAML::Value << s.taps;
  out << YAML::Key << "total_samples" << YAML::Value << s.total_samples;

  out << YAML::Key << "input" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(input_kind_name(s.input.kind));
  if (s.input.kind == InputKind::kAr1)
    out << YAML::Key << "pole" << YAML::Value << yaml_double(s.input.pole);
  if (s.input.kind == InputKind::kSpeech)
    out << YAML::Key << "path" << YAML::Value << s.input.path;
  out << YAML::EndMap;

  out << YAML::Key << "schedule" << YAML::Value << YAML::BeginSeq;
  for (const auto& seg : s.schedule) {
    out << YAML::BeginMap;
    out << YAML::Key << "start" << YAML::Value << seg.start;
    out << YAML::Key << "system" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(system_kind_name(seg.system.kind));
    switch (seg.system.kind) {
      case SystemKind::kBlockSparse:
        out << YAML::Key << "clusters" << YAML::Value << YAML::BeginSeq;
        for (const auto& c : seg.system.clusters)
          out << YAML::Flow << YAML::BeginSeq << c.start << c.length << YAML::EndSeq;
        out << YAML::EndSeq;
        break;
      case SystemKind::kQuasiSparseEcho:
        out << YAML::Key << "delay" << YAML::Value << seg.system.delay;
        out << YAML::Key << "decay_time" << YAML::Value << yaml_double(seg.system.decay_time);
        break;
      case SystemKind::kFile:
        out << YAML::Key << "path" << YAML::Value << seg.system.path;
        break;
      case SystemKind::kDispersive:
        break;
    }
    out << YAML::EndMap << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "snr_db" << YAML::Value << yaml_double(s.snr_db);
  out << YAML::Key << "runs" << YAML::Value << s.runs;
  out << YAML::Key << "base_seed" << YAML::Value << s.base_seed;
  out << YAML::Key << "record_stride" << YAML::Value << s.record_stride;

  out << YAML::Key << "algorithms" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : s.algorithms) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(a.kind));
    if (!a.label.empty()) out << YAML::Key << "label" << YAML::Value << a.label;
    out << YAML::Key << "mu" << YAML::Value << yaml_double(a.step_size);
    out << YAML::Key << "delta" << YAML::Value << yaml_double(a.regularization);
    if (a.kind == Algorithm::kPnlms || a.kind == Algorithm::kBsPnlms) {
      out << YAML::Key << "rho" << YAML::Value << yaml_double(a.rho);
      out << YAML::Key << "q" << YAML::Value << yaml_double(a.q);
    }
    if (a.kind == Algorithm::kIpnlms || a.kind == Algorithm::kBsIpnlms)
      out << YAML::Key << "alpha" << YAML::Value << yaml_double(a.alpha);
    if (is_block_sparse(a.kind)) out << YAML::Key << "P" << YAML::Value << a.group_size;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace bsprop
