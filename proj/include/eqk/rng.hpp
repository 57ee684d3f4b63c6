#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace eqk {

// Deterministic random source used by every sampling operation.
//
// Uniform and Gaussian doubles are derived from raw mt19937_64 output with
// explicit arithmetic (53-bit mantissa scaling, Box-Muller) instead of the
// std::*_distribution adapters, whose output sequences are
// implementation-defined. A given seed therefore reproduces the same stream
// on any platform, which the experiment artifacts rely on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal draw. Box-Muller; the second value of each pair is
  // cached, so draws come in deterministic order.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace eqk
