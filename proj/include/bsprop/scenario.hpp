// Declarative experiment description and its YAML form.
//
// A scenario file mirrors the Scenario struct one-to-one:
//
//   name: blocksparse_wgn
//   taps: 1024
//   total_samples: 80000
//   input: {kind: wgn}                 # wgn | ar1 (pole) | speech (path)
//   schedule:
//     - start: 0
//       system: {kind: block_sparse, clusters: [[257, 32]]}
//     - start: 40000
//       system: {kind: block_sparse, clusters: [[257, 16], [769, 32]]}
//   snr_db: 30                         # .inf disables measurement noise
//   runs: 5
//   base_seed: 1
//   record_stride: 10
//   algorithms:
//     - {kind: NLMS, mu: 0.1, delta: 0.01}
//     - {kind: BS_PNLMS, mu: 0.1, delta: 9.765625e-06, rho: 0.01, q: 0.01, P: 16}
//
// System kinds: block_sparse (clusters), dispersive, quasi_sparse_echo
// (delay, decay_time) and file (path). Unknown keys are rejected.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bsprop/filters.hpp"
#include "bsprop/systems.hpp"

namespace bsprop {

enum class InputKind { kWgn, kAr1, kSpeech };

struct InputSpec {
  InputKind kind = InputKind::kWgn;
  double pole = 0.8;      // ar1
  std::string path;       // speech
};

enum class SystemKind { kBlockSparse, kDispersive, kQuasiSparseEcho, kFile };

struct SystemSpec {
  SystemKind kind = SystemKind::kDispersive;
  std::vector<ClusterSpec> clusters;  // block_sparse
  std::size_t delay = 32;             // quasi_sparse_echo
  double decay_time = 64.0;           // quasi_sparse_echo
  std::string path;                   // file
};

struct PathChange {
  std::size_t start = 0;
  SystemSpec system;
};

struct AlgorithmSpec {
  std::string label;  // defaults to e.g. "BS-PNLMS(P=16)" when empty
  Algorithm kind = Algorithm::kNlms;
  double step_size = 0.1;
  double regularization = 0.01;
  double rho = 0.01;
  double q = 0.01;
  double alpha = 0.0;
  std::size_t group_size = 1;

  FilterConfig config(std::size_t taps) const;
  std::string display_label() const;
};

struct Scenario {
  std::string name = "custom";
  std::size_t taps = 0;
  std::size_t total_samples = 0;
  InputSpec input;
  std::vector<PathChange> schedule;
  double snr_db = 30.0;
  std::size_t runs = 1;
  std::uint64_t base_seed = 1;
  std::size_t record_stride = 10;
  std::vector<AlgorithmSpec> algorithms;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
  std::vector<std::size_t> switch_samples() const;
};

std::vector<std::string> scenario_names();
// blocksparse_wgn, blocksparse_ar1, dispersive_wgn, dispersive_ar1.
Scenario builtin_scenario(std::string_view name);

Scenario parse_scenario(std::string_view yaml_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_yaml(const Scenario& scenario);

}  // namespace bsprop
