#ifndef WEAKWHITTLE_RNG_HPP
#define WEAKWHITTLE_RNG_HPP

/** @file
 * Counter-based random numbers.
 *
 * Every draw is a pure function of (seed, stream, index, sub-draw), so a
 * process value at time index t can be regenerated in any order and on any
 * thread. Two-sided filters and parallel replications rely on this.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace weakwhittle {

/// Philox4x32-10 block function (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Counter single_round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Reproducible stream of variates indexed by signed time.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  /// 64 random bits for (index, sub).
  std::uint64_t bits(std::int64_t index, std::uint32_t sub = 0) const noexcept {
    const auto u = static_cast<std::uint64_t>(index);
    const auto out = Philox4x32::apply(
        {static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(u >> 32), stream_, sub}, key_);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  }

  /// Uniform on the open interval (0, 1).
  double uniform(std::int64_t index, std::uint32_t sub = 0) const noexcept {
    return (static_cast<double>(bits(index, sub) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on sub-draws (2*sub, 2*sub+1).
  double normal(std::int64_t index, std::uint32_t sub = 0) const noexcept {
    const double u1 = uniform(index, 2 * sub);
    const double u2 = uniform(index, 2 * sub + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_;
};

/// SplitMix64 finaliser; used to derive per-replication seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_RNG_HPP
