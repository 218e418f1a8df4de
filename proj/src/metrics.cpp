#include "bsprop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsprop {

namespace {

double to_ratio(double db) { return std::pow(10.0, db / 10.0); }

double to_db(double ratio) {
  if (!(ratio > 0.0)) return kMisalignmentFloorDb;
  return std::max(kMisalignmentFloorDb, 10.0 * std::log10(ratio));
}

}  // namespace

double normalized_misalignment_db(std::span<const double> truth,
                                  std::span<const double> estimate) {
  if (truth.size() != estimate.size())
    throw std::invalid_argument("misalignment: length mismatch");
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t l = 0; l < truth.size(); ++l) {
    const double diff = truth[l] - estimate[l];
    err += diff * diff;
    ref += truth[l] * truth[l];
  }
  if (!(ref > 0.0)) throw std::invalid_argument("misalignment: true system is zero");
  if (std::isnan(err)) return err;
  return to_db(err / ref);
}

MisalignmentCurve average_runs(const std::vector<MisalignmentCurve>& curves) {
  if (curves.empty()) throw std::invalid_argument("average_runs: no curves");
  const auto& first = curves.front();
  for (const auto& c : curves) {
    if (c.size() != first.size() || c.record_stride != first.record_stride)
      throw std::invalid_argument("average_runs: curves differ in length or stride");
  }
  if (curves.size() == 1) return first;

  MisalignmentCurve out;
  out.record_stride = first.record_stride;
  out.runs_averaged = curves.size();
  out.values_db.resize(first.size());
  const double inv = 1.0 / static_cast<double>(curves.size());
  for (std::size_t k = 0; k < first.size(); ++k) {
    double sum = 0.0;
    for (const auto& c : curves) sum += to_ratio(c.values_db[k]);
    out.values_db[k] = to_db(sum * inv);
  }
  return out;
}

std::optional<std::size_t> time_to_threshold(const MisalignmentCurve& curve,
                                             double threshold_db) {
  if (curve.record_stride == 0) throw std::invalid_argument("record stride must be >= 1");
  const auto& v = curve.values_db;
  const std::size_t window = (kDebounceSamples + curve.record_stride - 1) / curve.record_stride;
  const double ceiling = threshold_db + kDebounceMarginDb;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] <= threshold_db)) continue;
    const std::size_t last = std::min(v.size() - 1, k + window);
    bool holds = true;
    for (std::size_t j = k + 1; j <= last; ++j) {
      if (!(v[j] <= ceiling)) {
        holds = false;
        break;
      }
    }
    if (holds) return curve.sample_at(k);
  }
  return std::nullopt;
}

MisalignmentCurve slice_samples(const MisalignmentCurve& curve, std::size_t first_sample,
                                std::size_t end_sample) {
  if (curve.record_stride == 0) throw std::invalid_argument("record stride must be >= 1");
  if (first_sample % curve.record_stride != 0)
    throw std::invalid_argument("slice start must be a multiple of the record stride");
  MisalignmentCurve out;
  out.record_stride = curve.record_stride;
  out.runs_averaged = curve.runs_averaged;
  const std::size_t begin = first_sample / curve.record_stride;
  const std::size_t end = std::min(
      curve.size(), (end_sample + curve.record_stride - 1) / curve.record_stride);
  if (begin < end)
    out.values_db.assign(curve.values_db.begin() + static_cast<std::ptrdiff_t>(begin),
                         curve.values_db.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

}  // namespace bsprop
