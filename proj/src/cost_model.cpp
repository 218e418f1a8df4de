#include "bsprop/cost_model.hpp"

#include <stdexcept>
#include <string>

namespace bsprop {

CostBreakdown predicted_costs(Algorithm algorithm, std::size_t length,
                              std::size_t group_size) {
  if (length == 0) throw std::invalid_argument("L must be >= 1");
  if (group_size == 0) throw std::invalid_argument("P must be >= 1");
  if (is_block_sparse(algorithm) && length % group_size != 0)
    throw std::invalid_argument("P=" + std::to_string(group_size) + " does not divide L=" +
                                std::to_string(length));
  const std::uint64_t L = length;
  const std::uint64_t N = length / group_size;
  switch (algorithm) {
    case Algorithm::kNlms:
      return {2 * L + 3, 2 * L + 3, 1, 0, 0, 4 * L + 7};
    case Algorithm::kPnlms:
      return {4 * L + 2, 5 * L + 4, 2, 2 * L, 0, 8 * L + 11};
    case Algorithm::kBsPnlms:
      return {4 * L - 1, 6 * L + 3, 2, N + 1, N, 5 * L + 3 * N + 11};
    case Algorithm::kIpnlms:
      return {5 * L + 2, 6 * L + 2, 4, L - 1, 0, 8 * L + 11};
    case Algorithm::kBsIpnlms:
      return {4 * L + N - 1, 6 * L + N + 1, 2, 0, N, 5 * L + 3 * N + 11};
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace bsprop
