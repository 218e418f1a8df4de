// Seeded generators shared by the system, signal and harness modules.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace bsprop {

using Rng = std::mt19937_64;

// Stable 64-bit mix of (base seed, run index, stream label, sub-stream).
// Distinct labels or indices give unrelated generator seeds.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run,
                          std::string_view stream, std::uint64_t sub = 0);

// Fills `out` with i.i.d. standard normal draws.
void fill_gaussian(Rng& rng, std::span<double> out);

}  // namespace bsprop
