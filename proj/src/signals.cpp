#include "bsprop/signals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bsprop/io.hpp"
#include "bsprop/random.hpp"

namespace bsprop {

void PathSchedule::validate() const {
  if (segments.empty()) throw std::invalid_argument("path schedule is empty");
  if (segments.front().start != 0)
    throw std::invalid_argument("path schedule must start at sample 0");
  const std::size_t len = segments.front().ir.length();
  if (len == 0) throw std::invalid_argument("path schedule holds an empty impulse response");
  for (std::size_t k = 1; k < segments.size(); ++k) {
    if (segments[k].start <= segments[k - 1].start)
      throw std::invalid_argument("path schedule starts must be strictly increasing");
    if (segments[k].ir.length() != len)
      throw std::invalid_argument("path schedule impulse responses differ in length (" +
                                  std::to_string(len) + " vs " +
                                  std::to_string(segments[k].ir.length()) + ")");
  }
}

std::size_t PathSchedule::length() const {
  return segments.empty() ? 0 : segments.front().ir.length();
}

std::size_t PathSchedule::segment_at(std::size_t n) const {
  std::size_t k = 0;
  while (k + 1 < segments.size() && segments[k + 1].start <= n) ++k;
  return k;
}

std::size_t PathSchedule::segment_end(std::size_t k, std::size_t total) const {
  const std::size_t end = k + 1 < segments.size() ? segments[k + 1].start : total;
  return end < total ? end : total;
}

SignalBuffer gen_wgn(std::size_t count, std::uint64_t seed) {
  SignalBuffer out{std::vector<double>(count)};
  Rng rng(seed);
  fill_gaussian(rng, out.samples);
  return out;
}

SignalBuffer color_ar1(const SignalBuffer& x, double pole) {
  if (!(std::abs(pole) < 1.0))
    throw std::invalid_argument("AR(1) pole must satisfy |pole| < 1");
  SignalBuffer y{std::vector<double>(x.size()), x.sample_rate};
  double prev = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    prev = x.samples[n] + pole * prev;
    y.samples[n] = prev;
  }
  return y;
}

SignalBuffer load_speech(const std::filesystem::path& path) {
  auto wav = read_wav(path);
  if (wav.channels != 1)
    throw std::runtime_error("'" + path.string() + "': expected mono, found " +
                             std::to_string(wav.channels) + " channels");
  if (wav.sample_rate != static_cast<unsigned>(kSpeechSampleRate))
    throw std::runtime_error("'" + path.string() + "': expected 8000 Hz, found " +
                             std::to_string(wav.sample_rate) + " Hz");
  return SignalBuffer{std::move(wav.samples), kSpeechSampleRate};
}

void export_speech(const std::filesystem::path& path, const SignalBuffer& signal) {
  write_wav(path, signal.samples, static_cast<unsigned>(signal.sample_rate),
            WavEncoding::kPcm16);
}

void export_signal_text(const std::filesystem::path& path, const SignalBuffer& signal) {
  write_values_text(path, signal.samples);
}

namespace {

// One output sample of the FIR h over x, with zeros before time 0.
inline double fir_at(const double* x, const double* h, std::size_t taps, std::size_t n) {
  const std::size_t reach = n + 1 < taps ? n + 1 : taps;
  double acc = 0.0;
  for (std::size_t k = 0; k < reach; ++k) acc += h[k] * x[n - k];
  return acc;
}

}  // namespace

SignalBuffer synthesize_desired(const SignalBuffer& input, const PathSchedule& schedule,
                                Execution execution) {
  schedule.validate();
  const std::size_t total = input.size();
  const std::size_t taps = schedule.length();
  SignalBuffer d{std::vector<double>(total, 0.0), input.sample_rate};
  const double* x = input.samples.data();
  double* out = d.samples.data();

  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    const std::size_t begin = schedule.segments[k].start;
    const std::size_t end = schedule.segment_end(k, total);
    if (begin >= end) continue;
    const double* h = schedule.segments[k].ir.taps.data();
    if (execution == Execution::kParallel) {
      const auto first = static_cast<std::ptrdiff_t>(begin);
      const auto last = static_cast<std::ptrdiff_t>(end);
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t n = first; n < last; ++n)
        out[n] = fir_at(x, h, taps, static_cast<std::size_t>(n));
    } else {
      for (std::size_t n = begin; n < end; ++n) out[n] = fir_at(x, h, taps, n);
    }
  }
  return d;
}

double mean_power(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

SignalBuffer add_noise_snr(const SignalBuffer& clean, double snr_db, std::uint64_t seed) {
  const double power = mean_power(clean.samples);
  if (!(power > 0.0)) throw std::invalid_argument("cannot set an SNR against a silent signal");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SNR must be finite");
  const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
  SignalBuffer noisy{std::vector<double>(clean.size()), clean.sample_rate};
  Rng rng(seed);
  fill_gaussian(rng, noisy.samples);
  for (std::size_t n = 0; n < clean.size(); ++n)
    noisy.samples[n] = clean.samples[n] + sigma * noisy.samples[n];
  return noisy;
}

}  // namespace bsprop
