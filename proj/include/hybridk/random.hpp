#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace hybridk {

/// splitmix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Seeded random stream that can be split into independent child streams.
/// Sampling helpers avoid std distributions so results do not depend on the
/// standard library implementation.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  RandomStream split(std::uint64_t salt) const { return RandomStream(mix_seed(seed_, salt)); }

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound), bound >= 1.
  std::size_t uniform_index(std::size_t bound);
  /// Uniform double in [0, 1).
  double uniform01();
  double normal();

  /// `count` distinct indices from [0, n) in sampling order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace hybridk
