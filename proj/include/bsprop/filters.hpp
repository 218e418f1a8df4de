// Proportionate NLMS family: NLMS, PNLMS, IPNLMS and their block-sparse
// variants. Every algorithm is a gain law (the diagonal of G(n-1)) plus one
// shared proportionate coefficient update.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bsprop {

enum class Algorithm { kNlms, kPnlms, kIpnlms, kBsPnlms, kBsIpnlms };

std::string_view to_string(Algorithm algorithm);
// Accepts "NLMS", "PNLMS", "IPNLMS", "BS_PNLMS"/"BS-PNLMS",
// "BS_IPNLMS"/"BS-IPNLMS". Throws std::invalid_argument otherwise.
Algorithm algorithm_from_string(std::string_view name);
bool is_block_sparse(Algorithm algorithm);

// Added to the IPNLMS / BS-IPNLMS denominators so that the all-zero
// estimate yields a uniform (1 - alpha) / (2L) gain.
inline constexpr double kIpnlmsGuard = 1e-10;

struct FilterConfig {
  std::size_t length = 0;        // L, taps
  double step_size = 0.0;        // mu
  double regularization = 0.0;   // delta
  Algorithm algorithm = Algorithm::kNlms;
  double rho = 0.01;             // proportionality floor (PNLMS, BS-PNLMS)
  double q = 0.01;               // initialization floor (PNLMS, BS-PNLMS)
  double alpha = 0.0;            // proportionate mix (IPNLMS, BS-IPNLMS)
  std::size_t group_size = 1;    // P (BS-* only)

  // Throws std::invalid_argument on any violated invariant, including
  // L mod P != 0 for block-sparse algorithms.
  void validate() const;
  std::size_t num_groups() const { return length / group_size; }
};

// Diagonal of G(n-1).
struct GainProfile {
  std::vector<double> g;
};

// Coefficients, delay line and sample counter of one running filter.
//
// The delay line is exposed most-recent-first, [x(n), x(n-1), ...,
// x(n-L+1)], with zeros before time 0. Internally it is a sliding window
// over a buffer twice the filter length, so pushing a sample is amortized
// O(1).
class FilterState {
 public:
  explicit FilterState(std::size_t length);

  std::size_t length() const { return coefficients_.size(); }
  std::size_t sample_index() const { return sample_index_; }

  std::span<const double> coefficients() const { return coefficients_; }
  std::span<double> mutable_coefficients() { return coefficients_; }
  std::span<const double> delay_line() const;

  // Shifts x into the head of the delay line.
  void push_input(double x);
  // Replaces the whole delay line; `samples` is most-recent-first.
  void set_delay_line(std::span<const double> samples);
  void advance() { ++sample_index_; }

 private:
  std::vector<double> coefficients_;
  std::vector<double> buffer_;
  std::size_t head_;
  std::size_t sample_index_ = 0;
};

// e(n) = d(n) - x(n)^T h(n-1). Requires x(n) already pushed.
double predict_error(const FilterState& state, double desired);

// gamma_l = max{rho * max{q, |h_1|..|h_L|}, |h_l|}, g_l = gamma_l / mean(gamma).
GainProfile gain_pnlms(std::span<const double> coefficients, double rho,
                       double q);
void gain_pnlms(std::span<const double> coefficients, double rho, double q,
                std::span<double> out);

// g_l = (1 - alpha) / (2L) + (1 + alpha)|h_l| / (2 sum|h| + guard).
GainProfile gain_ipnlms(std::span<const double> coefficients, double alpha);
void gain_ipnlms(std::span<const double> coefficients, double alpha,
                 std::span<double> out);

// Euclidean norm of each group of P consecutive taps.
std::vector<double> block_norms(std::span<const double> coefficients,
                                std::size_t group_size);
void block_norms(std::span<const double> coefficients, std::size_t group_size,
                 std::span<double> out);

// Block version of the PNLMS law over the N group norms; each group gain is
// replicated across its P taps.
GainProfile gain_bs_pnlms(std::span<const double> norms, double rho, double q,
                          std::size_t group_size);
void gain_bs_pnlms(std::span<const double> norms, double rho, double q,
                   std::size_t group_size, std::span<double> out);

// Per-tap gain (1 - alpha) / (2L) + (1 + alpha)||h_[i]|| / (2P sum||h_[j]|| + guard).
GainProfile gain_bs_ipnlms(std::span<const double> norms, double alpha,
                           std::size_t group_size, std::size_t length);
void gain_bs_ipnlms(std::span<const double> norms, double alpha,
                    std::size_t group_size, std::size_t length,
                    std::span<double> out);

// Mixed l2,1 norm: sum of group Euclidean norms.
double l21_norm(std::span<const double> v, std::size_t group_size);

struct UpdateResult {
  double error = 0.0;
  // Set when x^T G x + delta == 0 (delta = 0 with a silent delay line); the
  // coefficients are left untouched in that case.
  bool skipped = false;
};

// h(n) = h(n-1) + mu G x e / (x^T G x + delta). Advances the sample index.
UpdateResult proportionate_update(FilterState& state, double desired,
                                  std::span<const double> gain,
                                  double step_size, double regularization);

// A configured filter: runs error -> gain from h(n-1) -> update per sample.
class AdaptiveFilter {
 public:
  explicit AdaptiveFilter(FilterConfig config);

  const FilterConfig& config() const { return config_; }
  const FilterState& state() const { return state_; }
  std::span<const double> coefficients() const { return state_.coefficients(); }
  std::span<const double> last_gain() const { return gain_; }
  std::size_t skipped_updates() const { return skipped_; }

  UpdateResult adapt(double input, double desired);
  // Gain of the configured law evaluated at the current estimate.
  void compute_gain(std::span<double> out) const;

 private:
  FilterConfig config_;
  FilterState state_;
  std::vector<double> gain_;
  mutable std::vector<double> norms_;
  std::size_t skipped_ = 0;
};

}  // namespace bsprop
