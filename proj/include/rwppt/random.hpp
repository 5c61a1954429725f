#pragma once

#include <cstdint>
#include <random>

namespace rwppt {

/// Splittable 64-bit seed. Child streams are derived with SplitMix64 so that
/// batch i of a parallel computation always sees the same generator state,
/// whatever the thread count.
class Seed {
 public:
  constexpr explicit Seed(std::uint64_t value = 0) noexcept : value_(value) {}

  constexpr std::uint64_t value() const noexcept { return value_; }

  constexpr Seed child(std::uint64_t index) const noexcept {
    return Seed(mix(mix(value_ ^ 0x6a09e667f3bcc909ULL) + mix(index + 0xbb67ae8584caa73bULL)));
  }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t value_;
};

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value()) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace rwppt
