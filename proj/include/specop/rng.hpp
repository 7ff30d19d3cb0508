#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace specop {

// Finalizer step of splitmix64. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A node in a deterministic seed tree. Every consumer of randomness gets its
// own stream derived from (parent key, child index), so the draw sequence of
// one task never depends on scheduling or on how many workers run.
class RngStream {
 public:
  static RngStream root(std::uint64_t seed) { return RngStream(mix64(seed)); }

  [[nodiscard]] RngStream child(std::uint64_t index) const {
    return RngStream(mix64(key_ ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
  }

  [[nodiscard]] std::uint64_t key() const { return key_; }

  [[nodiscard]] std::mt19937_64 engine() const { return std::mt19937_64(key_); }

 private:
  explicit RngStream(std::uint64_t key) : key_(key) {}
  std::uint64_t key_;
};

// Standard normal draws via Box-Muller. Implemented by hand because
// std::normal_distribution is not required to produce the same sequence
// across standard libraries, and runs must be reproducible bit for bit.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::mt19937_64 engine) : engine_(engine) {}
  explicit GaussianSampler(const RngStream& stream) : engine_(stream.engine()) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1], u2 in [0, 1); both use the top 53 bits of the engine.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * (*this)(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace specop
