#pragma once

#include <cstdint>
#include <random>

namespace lsmdp {

/// Seeded mt19937_64 with distribution code that does not depend on the
/// standard library implementation, so sampled streams are identical across
/// platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [0, bound). Requires bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of trajectory `index` in a batch started from `base_seed`.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

}  // namespace lsmdp
