// Plain-text vectors (one value per line) and mono WAV files.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bsprop {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// One value per line, LF-terminated. Throws std::runtime_error on I/O failure.
void write_values_text(const std::filesystem::path& path,
                       std::span<const double> values);
// Blank lines are ignored. Throws std::runtime_error if the file cannot be
// read, holds a non-numeric line, or holds no values.
std::vector<double> read_values_text(const std::filesystem::path& path);

enum class WavEncoding { kPcm16, kFloat32 };

struct WavData {
  std::vector<double> samples;  // scaled to [-1, 1]
  unsigned sample_rate = 0;
  unsigned channels = 0;
};

// Reads RIFF/WAVE with PCM (8/16/24/32-bit) or IEEE float (32/64-bit) data.
// Multi-channel files are returned interleaved; callers decide what to accept.
WavData read_wav(const std::filesystem::path& path);
// Mono writer. PCM16 samples are clipped to [-1, 1) and rounded.
void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               unsigned sample_rate, WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace bsprop
