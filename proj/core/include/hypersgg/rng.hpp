#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace hypersgg {

// Deterministic random source used wherever the library needs randomness.
//
// Algorithm "hypersgg-rng/1":
//   * core generator: std::mt19937_64, whose output sequence is fixed by the
//     C++ standard, seeded with a splitmix64-mixed value;
//   * substream k of seed s seeds the core with
//     mix64(s XOR 0x9E3779B97F4A7C15 * (k + 1));
//   * bounded integers: 128-bit multiply-shift with rejection (unbiased);
//   * unit doubles: top 53 bits of one 64-bit draw, scaled by 2^-53;
//   * weighted indices: one unit draw inverted against the running prefix
//     sum of the weights, accumulated left to right.
// Changing any of these rules, or the draw order of a caller that documents
// one, is a new algorithm version.
inline constexpr std::string_view kRngAlgorithm = "hypersgg-rng/1";

// splitmix64 finalizer (Steele, Lea & Flood).
std::uint64_t mix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  // Independent stream derived from (seed, stream_index). Streams drawn for
  // indices 0, 1, ... match a sequential execution ordered by index.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_index) {
    return Rng(seed ^ (0x9E3779B97F4A7C15ull * (stream_index + 1)));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, 1) with 53-bit resolution.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform index into a non-empty sequence.
  std::size_t index(std::size_t size) {
    return static_cast<std::size_t>(below(static_cast<std::uint64_t>(size)));
  }

  // Index drawn proportionally to non-negative weights with a positive sum.
  std::size_t weighted_index(std::span<const double> weights);

 private:
  std::mt19937_64 gen_;
};

}  // namespace hypersgg
