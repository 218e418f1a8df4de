#include "bsprop/systems.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "bsprop/io.hpp"
#include "bsprop/random.hpp"

namespace bsprop {

namespace {

void normalize(std::vector<double>& taps) {
  double energy = 0.0;
  for (double t : taps) energy += t * t;
  if (!(energy > 0.0)) throw std::runtime_error("impulse response has zero energy");
  const double inv = 1.0 / std::sqrt(energy);
  for (double& t : taps) t *= inv;
}

std::string describe(const std::vector<ClusterSpec>& clusters) {
  std::string s;
  for (const auto& c : clusters) {
    if (!s.empty()) s += "+";
    s += "[" + std::to_string(c.start) + "," + std::to_string(c.start + c.length - 1) + "]";
  }
  return s;
}

}  // namespace

ImpulseResponse make_block_sparse_ir(std::size_t length,
                                     const std::vector<ClusterSpec>& clusters,
                                     std::uint64_t seed) {
  if (length == 0) throw std::invalid_argument("impulse response length must be >= 1");
  if (clusters.empty()) throw std::invalid_argument("block-sparse response needs a cluster");
  for (const auto& c : clusters) {
    if (c.start < 1 || c.length < 1 || c.start + c.length - 1 > length) {
      throw std::invalid_argument("cluster " + describe({c}) + " outside taps [1," +
                                  std::to_string(length) + "]");
    }
  }
  auto sorted = clusters;
  std::sort(sorted.begin(), sorted.end(),
            [](const ClusterSpec& a, const ClusterSpec& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].start <= sorted[i - 1].start + sorted[i - 1].length - 1)
      throw std::invalid_argument("clusters " + describe({sorted[i - 1], sorted[i]}) + " overlap");
  }

  ImpulseResponse ir{std::vector<double>(length, 0.0), "block_sparse" + describe(clusters)};
  Rng rng(seed);
  // Draws follow the declaration order of the clusters.
  for (const auto& c : clusters)
    fill_gaussian(rng, std::span<double>(ir.taps).subspan(c.start - 1, c.length));
  normalize(ir.taps);
  return ir;
}

ImpulseResponse make_dispersive_ir(std::size_t length, std::uint64_t seed) {
  if (length == 0) throw std::invalid_argument("impulse response length must be >= 1");
  ImpulseResponse ir{std::vector<double>(length), "dispersive"};
  Rng rng(seed);
  fill_gaussian(rng, ir.taps);
  normalize(ir.taps);
  return ir;
}

double echo_envelope(std::size_t tap, std::size_t delay, double decay_time) {
  if (tap < delay) return 0.0;
  return std::exp(-static_cast<double>(tap - delay) / decay_time);
}

ImpulseResponse make_quasi_sparse_echo_ir(std::size_t length, std::size_t delay,
                                          double decay_time, std::uint64_t seed) {
  if (delay >= length)
    throw std::invalid_argument("echo delay " + std::to_string(delay) +
                                " must be below the length " + std::to_string(length));
  if (!(decay_time > 0.0) || !std::isfinite(decay_time))
    throw std::invalid_argument("decay time must be finite and > 0");
  ImpulseResponse ir{std::vector<double>(length, 0.0), "quasi_sparse_echo"};
  Rng rng(seed);
  auto tail = std::span<double>(ir.taps).subspan(delay);
  fill_gaussian(rng, tail);
  for (std::size_t k = delay; k < length; ++k) ir.taps[k] *= echo_envelope(k, delay, decay_time);
  normalize(ir.taps);
  return ir;
}

ImpulseResponse ir_from_file(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  ImpulseResponse ir;
  ir.label = path.filename().string();
  if (ext == ".wav") {
    auto wav = read_wav(path);
    if (wav.channels != 1)
      throw std::runtime_error("'" + path.string() + "': impulse response must be mono");
    if (wav.samples.empty()) throw std::runtime_error("'" + path.string() + "' holds no samples");
    ir.taps = std::move(wav.samples);
  } else {
    ir.taps = read_values_text(path);
  }
  return ir;
}

void write_ir(const std::filesystem::path& path, const ImpulseResponse& ir) {
  write_values_text(path, ir.taps);
}

}  // namespace bsprop
