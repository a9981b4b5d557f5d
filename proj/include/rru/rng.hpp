#ifndef RRU_RNG_HPP_
#define RRU_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "rru/model.hpp"

// Deterministic random streams. The engine is std::mt19937_64 (its output
// sequence is pinned by the standard) and every distribution transform is
// implemented here, so identical seeds give identical draws on any platform.

namespace rru {

/// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Per-replicate seed derivation. Frozen as part of the reproducibility
/// contract: seed_i = mix64(base ^ (i + 1) * golden-ratio-constant).
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t replicate_index) {
  return mix64(base_seed ^ ((replicate_index + 1) * 0x9e3779b97f4a7c15ull));
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// uniform on [0, 1) with 53 random bits
  double next_uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  double next_normal() {
    // Box-Muller, cosine branch only; two uniforms per draw
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  double next_gamma(double shape) {
    if (shape < 1.0) {
      double u = next_uniform();
      while (u <= 0.0) u = next_uniform();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = next_normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = next_uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// One response draw from the given family.
  double sample(const ResponseModel& m) {
    switch (m.kind) {
      case ResponseKind::bernoulli: return next_uniform() < m.a ? 1.0 : 0.0;
      case ResponseKind::normal: return m.a + m.b * next_normal();
      case ResponseKind::uniform: return m.a + (m.b - m.a) * next_uniform();
      case ResponseKind::exponential: return -std::log1p(-next_uniform()) / m.a;
      case ResponseKind::point_mass: return m.a;
      case ResponseKind::beta: {
        double x = next_gamma(m.a);
        double y = next_gamma(m.b);
        return x / (x + y);
      }
    }
    return 0.0;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rru

#endif  // RRU_RNG_HPP_
