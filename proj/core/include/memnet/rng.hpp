#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace memnet {

/// SplitMix64: the standard 64-bit mixing generator (additive gamma constant
/// plus a two-round finalizer). Platform-independent: results depend only on
/// the seed, never on std::random machinery.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]: the top 53 bits, shifted into (0,1] so that
  /// log() below never sees zero.
  double next_unit() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Substream `index` of a master seed: run the master generator and use its
  /// (index+1)-th output as the substream's initial state. Streams obtained
  /// this way are decorrelated by the finalizer.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 master(seed);
    std::uint64_t s = 0;
    for (std::uint64_t i = 0; i <= index; ++i) s = master.next();
    return SplitMix64(s);
  }

 private:
  std::uint64_t state_;
};

/// Standard normal deviates via the Box-Muller transform over SplitMix64
/// uniforms. The pair (r*cos, r*sin) is emitted in order, so the sample
/// sequence is a pure function of the underlying generator state.
class GaussianStream {
 public:
  explicit GaussianStream(SplitMix64 gen) : gen_(gen) {}

  double next() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = gen_.next_unit();
    const double u2 = gen_.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
  }

 private:
  SplitMix64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace memnet
