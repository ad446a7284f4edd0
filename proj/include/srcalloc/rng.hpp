#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace srcalloc {

// splitmix64 output function applied to x + golden gamma.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Derives an independent stream seed from a base seed and a byte tag.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) noexcept;
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;

 private:
  std::uint64_t state_;
};

// xoshiro256** seeded through splitmix64. Every random decision in the
// library goes through this type so outputs are reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;

  // Uniform integer in [0, range) by Lemire's multiply-and-reject method.
  // range must be non-zero.
  std::uint64_t bounded(std::uint64_t range) noexcept;

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept;

  // Standard normal deviate, Box-Muller cosine branch, one draw per call.
  double normal() noexcept;

  // Fisher-Yates, walking from the back.
  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(bounded(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  // Moves a uniform sample of `count` items, without replacement, into the
  // first `count` positions (forward partial Fisher-Yates).
  template <typename T>
  void sample_prefix(std::span<T> items, std::size_t count) noexcept {
    const std::size_t n = items.size();
    for (std::size_t i = 0; i < count && i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(bounded(n - i));
      using std::swap;
      swap(items[i], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace srcalloc
