#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ilio/geometry.hpp"

namespace ilio {

// Seeded Gaussian generator with a fixed Box-Muller mapping over
// std::mt19937_64. The standard pins the mt19937_64 sequence, so outputs are
// reproducible across toolchains (std::normal_distribution is not).
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // (0,1] for the log argument.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Vec3 normal3() {
    const double a = normal(), b = normal(), c = normal();
    return Vec3(a, b, c);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ilio
