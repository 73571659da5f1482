#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace dialogaug {

// FNV-1a, 64-bit variant.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

// PCG32 (XSH-RR, 64-bit state), bit-compatible with pcg32_srandom_r /
// pcg32_random_r / pcg32_boundedrand_r from the reference C implementation.
// Every seeded stream in this project is created with kDefaultStream so that
// outputs depend on the 64-bit seed alone.
class Pcg32 {
 public:
  using result_type = std::uint32_t;

  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kDefaultStream = 54ULL;

  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = kDefaultStream) noexcept {
    reseed(seed, stream);
  }

  void reseed(std::uint64_t seed, std::uint64_t stream = kDefaultStream) noexcept {
    state_ = 0U;
    inc_ = (stream << 1U) | 1U;
    next();
    state_ += seed;
    next();
  }

  std::uint32_t next() noexcept {
    const std::uint64_t old = state_;
    state_ = old * kMultiplier + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18U) ^ old) >> 27U);
    const auto rot = static_cast<std::uint32_t>(old >> 59U);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31U));
  }

  std::uint32_t operator()() noexcept { return next(); }

  // Uniform in [0, bound) by rejection; bound must be > 0.
  std::uint32_t bounded(std::uint32_t bound) noexcept {
    const std::uint32_t threshold = (-bound) % bound;
    for (;;) {
      const std::uint32_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [lo, hi], inclusive.
  std::uint32_t uniform_int(std::uint32_t lo, std::uint32_t hi) noexcept {
    return lo + bounded(hi - lo + 1U);
  }

  // Uniform double in [0, 1) with 32 bits of resolution.
  double unit() noexcept { return static_cast<double>(next()) * 0x1.0p-32; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return 0xffffffffU; }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

// Fisher-Yates, descending: for i = n-1..1 swap(items[i], items[bounded(i+1)]).
template <typename T>
void fisher_yates_shuffle(std::span<T> items, Pcg32& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.bounded(static_cast<std::uint32_t>(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace dialogaug
