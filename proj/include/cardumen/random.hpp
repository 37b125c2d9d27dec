#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace cardumen {

/// Seeded generator. Uniform doubles are derived from the raw 64-bit output
/// so that sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

class AllZeroWeights : public std::invalid_argument {
 public:
  AllZeroWeights()
      : std::invalid_argument("weighted choice over weights that sum to 0") {}
};

/// Index k with probability weights[k] / sum(weights). Weights must be
/// nonnegative; throws AllZeroWeights when none is positive.
std::size_t weighted_index(std::span<const double> weights, Rng& rng);

template <typename T>
const T& weighted_choice(std::span<const T> items,
                         std::span<const double> weights, Rng& rng) {
  if (items.size() != weights.size()) {
    throw std::invalid_argument("weighted_choice: size mismatch");
  }
  return items[weighted_index(weights, rng)];
}

}  // namespace cardumen
