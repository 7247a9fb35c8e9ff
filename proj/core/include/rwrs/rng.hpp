#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

// Deterministic random number machinery.
//
// Every stochastic object in this library is a pure function of
// (model, size, seed).  Streams are decorrelated by hashing
// (base_seed, domain, index) through the SplitMix64 finalizer; the
// generator behind each stream is xoshiro256++.  Both algorithms are
// published, constant-free-of-ambiguity designs, so sequences are stable
// across runs, platforms and thread counts.

namespace rwrs {

// SplitMix64 finalizer (Steele/Lea/Vigna).  Full-avalanche 64-bit mix.
constexpr std::uint64_t avalanche64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return avalanche64(state_);
  }

 private:
  std::uint64_t state_;
};

// Disjoint derivation domains.  Walk streams and scenery streams can never
// collide because their domain tags differ in the mix below.
namespace seed_domain {
inline constexpr std::uint64_t walk = 0x77616c6b2d696e63ULL;
inline constexpr std::uint64_t scenery = 0x7363656e65727921ULL;
inline constexpr std::uint64_t site = 0x736974652d696e6eULL;
inline constexpr std::uint64_t diagnostic = 0x646961676e6f7374ULL;
}  // namespace seed_domain

// Stream seed for (base, domain, index): three chained SplitMix64 steps,
// xoring in one input per step.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t domain,
                                    std::uint64_t index) noexcept {
  std::uint64_t h = avalanche64(base + 0x9e3779b97f4a7c15ULL);
  h = avalanche64((h ^ domain) + 0x9e3779b97f4a7c15ULL);
  h = avalanche64((h ^ index) + 0x9e3779b97f4a7c15ULL);
  return h;
}

// Map a signed site index to a unique stream index (0,-1,1,-2,... -> 0,1,2,3,...).
constexpr std::uint64_t zigzag64(long long i) noexcept {
  return (static_cast<std::uint64_t>(i) << 1) ^
         static_cast<std::uint64_t>(i >> 63);
}

// xoshiro256++ (Blackman/Vigna), state seeded through SplitMix64 as the
// authors recommend.  Uniform doubles take the top 53 bits; normals come
// from a Box-Muller pair so every draw count is seed-determined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  std::pair<double, double> normal_pair() noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double t = 2.0 * kPi * uniform01();
    return {r * std::cos(t), r * std::sin(t)};
  }

  double normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    auto [a, b] = normal_pair();
    spare_ = b;
    have_spare_ = true;
    return a;
  }

  double exponential() noexcept { return -std::log(uniform_pos()); }

  // Pareto with scale 1: P(X > x) = x^{-tail_index} for x >= 1.
  double pareto(double tail_index) noexcept {
    return std::pow(uniform_pos(), -1.0 / tail_index);
  }

  bool coin() noexcept { return (next_u64() >> 63) != 0; }

  // Uniform in {0,...,m-1} by fixed-point multiply (bias < m / 2^64).
  std::uint64_t bounded(std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * m) >> 64);
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rwrs
