#include "bsprop/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsprop {

namespace {

void require_partition(std::size_t length, std::size_t group_size) {
  if (group_size == 0) throw std::invalid_argument("group size must be >= 1");
  if (length % group_size != 0) {
    throw std::invalid_argument("filter length " + std::to_string(length) +
                                " is not divisible by group size " +
                                std::to_string(group_size));
  }
}

void require_size(std::span<const double> out, std::size_t expected,
                  const char* what) {
  if (out.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": output has " +
                                std::to_string(out.size()) + " entries, expected " +
                                std::to_string(expected));
  }
}

void require_size(std::span<double> out, std::size_t expected, const char* what) {
  require_size(std::span<const double>(out), expected, what);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kNlms: return "NLMS";
    case Algorithm::kPnlms: return "PNLMS";
    case Algorithm::kIpnlms: return "IPNLMS";
    case Algorithm::kBsPnlms: return "BS_PNLMS";
    case Algorithm::kBsIpnlms: return "BS_IPNLMS";
  }
  return "?";
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "NLMS") return Algorithm::kNlms;
  if (name == "PNLMS") return Algorithm::kPnlms;
  if (name == "IPNLMS") return Algorithm::kIpnlms;
  if (name == "BS_PNLMS" || name == "BS-PNLMS") return Algorithm::kBsPnlms;
  if (name == "BS_IPNLMS" || name == "BS-IPNLMS") return Algorithm::kBsIpnlms;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

bool is_block_sparse(Algorithm algorithm) {
  return algorithm == Algorithm::kBsPnlms || algorithm == Algorithm::kBsIpnlms;
}

void FilterConfig::validate() const {
  if (length == 0) throw std::invalid_argument("filter length must be >= 1");
  if (!(step_size > 0.0) || !std::isfinite(step_size))
    throw std::invalid_argument("step size must be finite and > 0");
  if (!(regularization >= 0.0) || !std::isfinite(regularization))
    throw std::invalid_argument("regularization must be finite and >= 0");
  switch (algorithm) {
    case Algorithm::kPnlms:
    case Algorithm::kBsPnlms:
      if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
      if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("q must be > 0");
      break;
    case Algorithm::kIpnlms:
    case Algorithm::kBsIpnlms:
      if (!(alpha >= -1.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in [-1, 1)");
      break;
    case Algorithm::kNlms:
      break;
  }
  if (is_block_sparse(algorithm)) require_partition(length, group_size);
}

// ---------------------------------------------------------------------------
// FilterState

FilterState::FilterState(std::size_t length)
    : coefficients_(length, 0.0), buffer_(2 * length, 0.0), head_(length) {
  if (length == 0) throw std::invalid_argument("filter length must be >= 1");
}

std::span<const double> FilterState::delay_line() const {
  return std::span<const double>(buffer_).subspan(head_, coefficients_.size());
}

void FilterState::push_input(double x) {
  const std::size_t length = coefficients_.size();
  if (head_ == 0) {
    // Slide the newest L-1 samples to the tail so the head has room again.
    std::copy_backward(buffer_.begin(), buffer_.begin() + (length - 1),
                       buffer_.end());
    head_ = length + 1;
  }
  --head_;
  buffer_[head_] = x;
}

void FilterState::set_delay_line(std::span<const double> samples) {
  require_size(samples, coefficients_.size(), "set_delay_line");
  head_ = coefficients_.size();
  std::copy(samples.begin(), samples.end(), buffer_.begin() + head_);
}

double predict_error(const FilterState& state, double desired) {
  const auto x = state.delay_line();
  const auto h = state.coefficients();
  double y = 0.0;
  for (std::size_t l = 0; l < h.size(); ++l) y += x[l] * h[l];
  return desired - y;
}

// ---------------------------------------------------------------------------
// Gain laws

void gain_pnlms(std::span<const double> coefficients, double rho, double q,
                std::span<double> out) {
  require_size(out, coefficients.size(), "gain_pnlms");
  double largest = q;
  for (double h : coefficients) largest = std::max(largest, std::abs(h));
  const double floor = rho * largest;
  double sum = 0.0;
  for (std::size_t l = 0; l < coefficients.size(); ++l) {
    out[l] = std::max(floor, std::abs(coefficients[l]));
    sum += out[l];
  }
  const double mean = sum / static_cast<double>(coefficients.size());
  for (double& g : out) g /= mean;
}

GainProfile gain_pnlms(std::span<const double> coefficients, double rho, double q) {
  GainProfile profile{std::vector<double>(coefficients.size())};
  gain_pnlms(coefficients, rho, q, profile.g);
  return profile;
}

void gain_ipnlms(std::span<const double> coefficients, double alpha,
                 std::span<double> out) {
  const std::size_t length = coefficients.size();
  require_size(out, length, "gain_ipnlms");
  double l1 = 0.0;
  for (double h : coefficients) l1 += std::abs(h);
  const double uniform = (1.0 - alpha) / (2.0 * static_cast<double>(length));
  const double denom = 2.0 * l1 + kIpnlmsGuard;
  for (std::size_t l = 0; l < length; ++l)
    out[l] = uniform + (1.0 + alpha) * std::abs(coefficients[l]) / denom;
}

GainProfile gain_ipnlms(std::span<const double> coefficients, double alpha) {
  GainProfile profile{std::vector<double>(coefficients.size())};
  gain_ipnlms(coefficients, alpha, profile.g);
  return profile;
}

void block_norms(std::span<const double> coefficients, std::size_t group_size,
                 std::span<double> out) {
  require_partition(coefficients.size(), group_size);
  const std::size_t groups = coefficients.size() / group_size;
  require_size(out, groups, "block_norms");
  for (std::size_t i = 0; i < groups; ++i) {
    const double* block = coefficients.data() + i * group_size;
    double energy = 0.0;
    for (std::size_t k = 0; k < group_size; ++k) energy += block[k] * block[k];
    out[i] = std::sqrt(energy);
  }
}

std::vector<double> block_norms(std::span<const double> coefficients,
                                std::size_t group_size) {
  require_partition(coefficients.size(), group_size);
  std::vector<double> norms(coefficients.size() / group_size);
  block_norms(coefficients, group_size, norms);
  return norms;
}

void gain_bs_pnlms(std::span<const double> norms, double rho, double q,
                   std::size_t group_size, std::span<double> out) {
  if (group_size == 0) throw std::invalid_argument("group size must be >= 1");
  const std::size_t groups = norms.size();
  require_size(out, groups * group_size, "gain_bs_pnlms");
  double largest = q;
  for (double n : norms) largest = std::max(largest, n);
  const double floor = rho * largest;
  // gamma_i is staged in the first N output slots, then expanded backwards so
  // that no slot is overwritten before it is read.
  double sum = 0.0;
  for (std::size_t i = 0; i < groups; ++i) {
    out[i] = std::max(floor, norms[i]);
    sum += out[i];
  }
  const double mean = sum / static_cast<double>(groups);
  for (std::size_t i = groups; i-- > 0;) {
    const double g = out[i] / mean;
    std::fill_n(out.begin() + i * group_size, group_size, g);
  }
}

GainProfile gain_bs_pnlms(std::span<const double> norms, double rho, double q,
                          std::size_t group_size) {
  if (group_size == 0) throw std::invalid_argument("group size must be >= 1");
  GainProfile profile{std::vector<double>(norms.size() * group_size)};
  gain_bs_pnlms(norms, rho, q, group_size, profile.g);
  return profile;
}

void gain_bs_ipnlms(std::span<const double> norms, double alpha,
                    std::size_t group_size, std::size_t length,
                    std::span<double> out) {
  if (group_size == 0) throw std::invalid_argument("group size must be >= 1");
  if (norms.size() * group_size != length)
    throw std::invalid_argument("gain_bs_ipnlms: N * P must equal L");
  require_size(out, length, "gain_bs_ipnlms");
  double total = 0.0;
  for (double n : norms) total += n;
  const double uniform = (1.0 - alpha) / (2.0 * static_cast<double>(length));
  const double denom = 2.0 * static_cast<double>(group_size) * total + kIpnlmsGuard;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double g = uniform + (1.0 + alpha) * norms[i] / denom;
    std::fill_n(out.begin() + i * group_size, group_size, g);
  }
}

GainProfile gain_bs_ipnlms(std::span<const double> norms, double alpha,
                           std::size_t group_size, std::size_t length) {
  GainProfile profile{std::vector<double>(length)};
  gain_bs_ipnlms(norms, alpha, group_size, length, profile.g);
  return profile;
}

double l21_norm(std::span<const double> v, std::size_t group_size) {
  const auto norms = block_norms(v, group_size);
  double sum = 0.0;
  for (double n : norms) sum += n;
  return sum;
}

// ---------------------------------------------------------------------------
// Update

UpdateResult proportionate_update(FilterState& state, double desired,
                                  std::span<const double> gain,
                                  double step_size, double regularization) {
  const std::size_t length = state.length();
  require_size(gain, length, "proportionate_update");
  const auto x = state.delay_line();
  auto h = state.mutable_coefficients();

  UpdateResult result;
  result.error = predict_error(state, desired);

  double energy = 0.0;
  for (std::size_t l = 0; l < length; ++l) energy += x[l] * gain[l] * x[l];
  const double denom = energy + regularization;
  if (denom == 0.0) {
    result.skipped = true;
  } else {
    const double scale = step_size * result.error / denom;
    for (std::size_t l = 0; l < length; ++l) h[l] += scale * gain[l] * x[l];
  }
  state.advance();
  return result;
}

// ---------------------------------------------------------------------------
// AdaptiveFilter

AdaptiveFilter::AdaptiveFilter(FilterConfig config)
    : config_(config), state_((config.validate(), config.length)),
      gain_(config.length, 1.0) {
  if (is_block_sparse(config_.algorithm)) norms_.resize(config_.num_groups());
}

void AdaptiveFilter::compute_gain(std::span<double> out) const {
  const auto h = state_.coefficients();
  switch (config_.algorithm) {
    case Algorithm::kNlms:
      require_size(out, h.size(), "compute_gain");
      std::fill(out.begin(), out.end(), 1.0);
      break;
    case Algorithm::kPnlms:
      gain_pnlms(h, config_.rho, config_.q, out);
      break;
    case Algorithm::kIpnlms:
      gain_ipnlms(h, config_.alpha, out);
      break;
    case Algorithm::kBsPnlms:
      block_norms(h, config_.group_size, norms_);
      gain_bs_pnlms(norms_, config_.rho, config_.q, config_.group_size, out);
      break;
    case Algorithm::kBsIpnlms:
      block_norms(h, config_.group_size, norms_);
      gain_bs_ipnlms(norms_, config_.alpha, config_.group_size, config_.length, out);
      break;
  }
}

UpdateResult AdaptiveFilter::adapt(double input, double desired) {
  state_.push_input(input);
  if (config_.algorithm != Algorithm::kNlms) compute_gain(gain_);
  const auto result = proportionate_update(state_, desired, gain_,
                                           config_.step_size,
                                           config_.regularization);
  if (result.skipped) ++skipped_;
  return result;
}

}  // namespace bsprop
