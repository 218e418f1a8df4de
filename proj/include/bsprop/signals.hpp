// Excitation signals, echo-path synthesis and measurement-noise injection.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "bsprop/execution.hpp"
#include "bsprop/systems.hpp"

namespace bsprop {

inline constexpr double kSpeechSampleRate = 8000.0;

struct SignalBuffer {
  std::vector<double> samples;
  double sample_rate = kSpeechSampleRate;

  std::size_t size() const { return samples.size(); }
};

// Piecewise-constant echo path: segment k is active from its start until the
// next segment's start.
struct PathSchedule {
  struct Segment {
    std::size_t start = 0;
    ImpulseResponse ir;
  };
  std::vector<Segment> segments;

  // First start 0, strictly increasing starts, equal IR lengths.
  void validate() const;
  std::size_t length() const;
  // Index of the segment active at sample n.
  std::size_t segment_at(std::size_t n) const;
  // One past the last sample of segment k, capped at `total`.
  std::size_t segment_end(std::size_t k, std::size_t total) const;
};

SignalBuffer gen_wgn(std::size_t count, std::uint64_t seed);

// y(n) = x(n) + pole * y(n - 1), y(-1) = 0. Requires |pole| < 1.
SignalBuffer color_ar1(const SignalBuffer& x, double pole);

// Mono linear-PCM or float WAV at 8 kHz, scaled to [-1, 1].
SignalBuffer load_speech(const std::filesystem::path& path);
void export_speech(const std::filesystem::path& path, const SignalBuffer& signal);
void export_signal_text(const std::filesystem::path& path, const SignalBuffer& signal);

// d(n) = x(n)^T h_active(n); the delay line carries across path switches.
SignalBuffer synthesize_desired(const SignalBuffer& input, const PathSchedule& schedule,
                                Execution execution = Execution::kParallel);

double mean_power(const std::vector<double>& samples);

// clean + v with var(v) = power(clean) * 10^(-snr_db / 10).
// Throws std::invalid_argument for an all-zero buffer.
SignalBuffer add_noise_snr(const SignalBuffer& clean, double snr_db, std::uint64_t seed);

}  // namespace bsprop
