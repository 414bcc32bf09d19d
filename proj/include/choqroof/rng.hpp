#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "choqroof/matrix.hpp"

namespace choqroof {

/// Deterministic seed-stream splitter. Used to derive independent sub-seeds
/// (per restart, per atom, ...) from one master seed so that runs with more
/// restarts reuse the same prefix of the stream.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : s_(seed) {}

  uint64_t next() {
    s_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t s_;
};

/// Seeded RNG with explicit uniform/gaussian mappings. std::mt19937_64 has a
/// standard-specified output sequence and the mappings below avoid the
/// implementation-defined distribution adapters, so identical seeds give
/// bitwise-identical samples everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  Complex cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  uint64_t next_u64() { return gen_(); }

  /// Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return gen_() % n; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace choqroof
