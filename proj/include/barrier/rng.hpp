#pragma once

#include <cstdint>
#include <random>

namespace barrier {

std::uint64_t splitmix64(std::uint64_t x);

// Seedable, splittable stream. split(i) gives an independent child stream,
// so realisation i draws the same numbers no matter how work is scheduled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng split(std::uint64_t stream) const;
  std::uint64_t seed() const { return seed_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace barrier
