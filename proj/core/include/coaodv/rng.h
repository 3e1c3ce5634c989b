#pragma once

#include <cstdint>
#include <random>

namespace coaodv {

/// Seeded random stream. Draws are implemented on top of the raw 64-bit
/// engine output so sequences do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from a run seed and a stream tag.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace coaodv
