#pragma once

#include <cstdint>
#include <random>

namespace mlrlab {

/// SplitMix64 finalizer. Used to derive independent sub-seeds from a base
/// seed and a tag, so that adding a new consumer never shifts existing
/// streams.
std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

/// Portable random source: std::mt19937_64 (bit-exact across standard
/// libraries) with hand-written uniform and Box-Muller normal transforms,
/// since the std:: distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mlrlab
