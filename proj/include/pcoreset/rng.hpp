#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pcoreset {

/// Seedable, splittable random stream.
///
/// Stream derivation: a child seed is obtained by folding each path element
/// into the parent with SplitMix64,
///     h₀ = mix(seed),  hᵢ₊₁ = mix(hᵢ ⊕ mix(idᵢ + 0x9E3779B97F4A7C15)),
/// and the engine is a std::mt19937_64 seeded with the final h. The same
/// (seed, path) always yields the same stream, and distinct paths yield
/// independent-looking streams, so per-cell and per-node streams do not
/// depend on scheduling.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t mix(std::uint64_t x);
  static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return Rng(derive(seed, path));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);
  double normal();
  /// ±1 with equal probability.
  double sign();

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace pcoreset
