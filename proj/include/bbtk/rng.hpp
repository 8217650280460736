// Deterministic splittable pseudorandom generator built on the splitmix64
// finalizer. Pure 64-bit integer arithmetic, so identical (seed, stream)
// pairs replay the same draw sequence on every platform. An instance is not
// thread-safe; derive one stream per task with split().
#pragma once

#include "bbtk/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace bbtk {

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : origin_(derive(mix64(seed), stream)), state_(origin_) {}

  /// Independent child stream. Depends only on (seed, stream, key), never on
  /// how many draws were taken, so split trees are stable.
  Rng split(std::uint64_t key) const { return Rng(RawTag{}, derive(origin_, key)); }

  /// Stateless seed derivation used for per-sample dataset seeds.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t key) {
    return mix64(seed + 0x9e3779b97f4a7c15ull * (key + 1));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64_finalize(state_);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased-enough integer in [0, n) via 128-bit multiply.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  int bit() { return static_cast<int>(next_u64() >> 63); }

  /// Standard normal via Box-Muller (second value cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = 1.0 - uniform();  // (0, 1]
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double t = 2.0 * std::numbers::pi_v<double> * v;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Circular complex Gaussian with E|z|^2 = 1.
  Cplx cgaussian() {
    const double a = gaussian();
    const double b = gaussian();
    return {a * std::numbers::sqrt2_v<double> / 2.0,
            b * std::numbers::sqrt2_v<double> / 2.0};
  }

  /// splitmix64 step applied to a raw value; exposed for test vectors.
  static std::uint64_t mix64(std::uint64_t z) {
    return mix64_finalize(z + 0x9e3779b97f4a7c15ull);
  }

 private:
  struct RawTag {};
  Rng(RawTag, std::uint64_t raw) : origin_(raw), state_(raw) {}

  static std::uint64_t mix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t origin_;
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace bbtk
