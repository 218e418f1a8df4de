// Closed-form per-sample operation counts of the coefficient update.

#pragma once

#include <cstdint>
#include <cstddef>

#include "bsprop/filters.hpp"

namespace bsprop {

struct CostBreakdown {
  std::uint64_t additions = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t divisions = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t square_roots = 0;
  std::uint64_t memory_words = 0;

  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

// P is only consulted for the block-sparse algorithms (N = L / P); it must
// divide L there. Throws std::invalid_argument for L = 0 or P = 0.
CostBreakdown predicted_costs(Algorithm algorithm, std::size_t length,
                              std::size_t group_size);

}  // namespace bsprop
