// Ground-truth echo paths: block-sparse, dispersive and a synthetic
// quasi-sparse acoustic path. All generated responses have unit norm.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bsprop {

// A run of nonzero taps. `start` is 1-based.
struct ClusterSpec {
  std::size_t start = 1;
  std::size_t length = 1;
};

struct ImpulseResponse {
  std::vector<double> taps;
  std::string label;

  std::size_t length() const { return taps.size(); }
};

// Gaussian taps on the union of `clusters`, zeros elsewhere, unit norm.
// Throws std::invalid_argument on empty, out-of-range or overlapping clusters.
ImpulseResponse make_block_sparse_ir(std::size_t length,
                                     const std::vector<ClusterSpec>& clusters,
                                     std::uint64_t seed);

ImpulseResponse make_dispersive_ir(std::size_t length, std::uint64_t seed);

// Pure delay of `delay` taps followed by Gaussian taps under an exponential
// envelope exp(-(k - delay) / decay_time).
ImpulseResponse make_quasi_sparse_echo_ir(std::size_t length, std::size_t delay,
                                          double decay_time, std::uint64_t seed);

// Envelope applied by make_quasi_sparse_echo_ir at 0-based tap k.
double echo_envelope(std::size_t tap, std::size_t delay, double decay_time);

// Plain text (one value per line) or, for a .wav extension, a mono audio file.
ImpulseResponse ir_from_file(const std::filesystem::path& path);
void write_ir(const std::filesystem::path& path, const ImpulseResponse& ir);

}  // namespace bsprop
