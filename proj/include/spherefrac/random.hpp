#pragma once

#include <cstdint>
#include <random>

namespace spherefrac {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded, splittable random stream.
///
/// Every sampling routine takes a stream explicitly; there is no global generator. Child streams
/// produced by split() depend only on the parent seed and the index, so work that is cut into
/// chunks reproduces bit for bit no matter how the chunks are scheduled.
class RandomStream {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

  explicit RandomStream(std::uint64_t seed = kDefaultSeed);

  RandomStream split(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  double normal();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spherefrac
