#include "srcalloc/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace srcalloc {

std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) noexcept {
  std::uint64_t h = mix64(seed);
  for (const char c : tag) {
    h = mix64(h ^ static_cast<std::uint8_t>(c));
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  return mix64(mix64(seed) ^ salt);
}

std::uint64_t SplitMix64::next() noexcept {
  const std::uint64_t out = mix64(state_);
  state_ += 0x9E3779B97F4A7C15ULL;
  return out;
}

Rng::Rng(std::uint64_t seed) noexcept {
  SplitMix64 expander(seed);
  for (auto& word : s_) word = expander.next();
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

__extension__ typedef unsigned __int128 uint128;

std::uint64_t Rng::bounded(std::uint64_t range) noexcept {
  std::uint64_t x = next();
  uint128 m = static_cast<uint128>(x) * range;
  std::uint64_t low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      x = next();
      m = static_cast<uint128>(x) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() noexcept {
  // u1 in (0, 1] keeps the log finite.
  const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace srcalloc
