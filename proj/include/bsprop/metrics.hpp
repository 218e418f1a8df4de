// Normalized misalignment, run averaging and convergence-time extraction.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bsprop {

inline constexpr double kMisalignmentFloorDb = -300.0;
// A crossing counts only if the curve stays within +3 dB of the threshold
// for this many samples afterwards.
inline constexpr std::size_t kDebounceSamples = 1000;
inline constexpr double kDebounceMarginDb = 3.0;

struct MisalignmentCurve {
  std::vector<double> values_db;   // record k is sample k * record_stride
  std::size_t record_stride = 1;
  std::size_t runs_averaged = 1;

  std::size_t size() const { return values_db.size(); }
  std::size_t sample_at(std::size_t record) const { return record * record_stride; }
};

// 10 log10(||h - h_hat||^2 / ||h||^2), clamped below at -300 dB.
double normalized_misalignment_db(std::span<const double> truth,
                                  std::span<const double> estimate);

// Mean of the linear ratios, converted back to dB.
MisalignmentCurve average_runs(const std::vector<MisalignmentCurve>& curves);

// Sample index (relative to the curve's first record) of the first record at
// or below threshold_db that stays <= threshold_db + 3 dB over the following
// 1000 samples. The debounce window is cut short at the end of the curve.
std::optional<std::size_t> time_to_threshold(const MisalignmentCurve& curve,
                                             double threshold_db);

// Records whose sample index lies in [first_sample, end_sample). first_sample
// must be a multiple of the stride.
MisalignmentCurve slice_samples(const MisalignmentCurve& curve, std::size_t first_sample,
                                std::size_t end_sample);

}  // namespace bsprop
