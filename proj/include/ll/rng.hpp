#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ll {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace detail

/// Seedable, splittable deterministic randomness source. Identical
/// (seed, path) yields identical draw sequences; children on distinct paths
/// are independent streams (xoshiro256++ keyed by a hash of seed and path).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) { reset_state(); }

  RandomStream child(std::uint64_t index) const {
    RandomStream c(*this);
    c.path_.push_back(index);
    c.reset_state();
    return c;
  }

  std::uint64_t seed() const { return seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  /// uniform in [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  /// uniform in (0, 1)
  double uniform_open() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  double normal() {
    double u1 = uniform_open(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double exponential() { return -std::log(uniform_open()); }

  /// Gamma(shape, 1) via Marsaglia-Tsang; boosted for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      double g = gamma(shape + 1.0);
      return g * std::pow(uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  void reset_state() {
    std::uint64_t key = seed_ ^ 0xd1b54a32d192ed03ULL;
    std::uint64_t mix = key;
    key = detail::splitmix64(mix);
    for (std::uint64_t e : path_) {
      mix ^= detail::splitmix64(mix) + e * 0x9e3779b97f4a7c15ULL;
      key = detail::splitmix64(mix);
    }
    std::uint64_t st = key;
    for (auto& s : s_) s = detail::splitmix64(st);
  }

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::uint64_t s_[4];
};

}  // namespace ll
