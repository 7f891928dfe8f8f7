#pragma once

#include <cstdint>
#include <random>

namespace rkhs {

/// Deterministic uniform double generator.
///
/// mt19937_64 output is pinned by the standard and the 53-bit mantissa
/// mapping below is pure integer arithmetic, so streams are bit-identical
/// across platforms. std::uniform_real_distribution is implementation
/// defined and must not be used where reproducibility matters.
class UnitRng {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

  explicit UnitRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rkhs
