#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

namespace crackle {

// 64-bit avalanche mix (splitmix64 finalizer).  Bijective, so distinct
// counters never collide within a stream.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Counter-based generator.  A stream is a pure function of (seed, stream id),
// and each draw is a pure function of (key, counter).  Streams can be handed
// to workers in any order and still reproduce byte-identical results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1)) ^
             mix64(stream + 0xd1b54a32d192ed03ull)) {}

  // Derive a child stream without disturbing this one.
  Rng split(std::uint64_t substream) const {
    return Rng(raw{}, key_ ^ mix64(substream + 0x2545f4914f6cdd1dull));
  }

  std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ull * ++ctr_); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller.  Done by hand: std::normal_distribution
  // is not bit-reproducible across standard library implementations.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform direction on S^{d-1}.
  Eigen::VectorXd unit_vector(int d) {
    Eigen::VectorXd v(d);
    double n2;
    do {
      for (int i = 0; i < d; ++i) v[i] = normal();
      n2 = v.squaredNorm();
    } while (n2 < 1e-280);
    return v / std::sqrt(n2);
  }

  // Uniform in the closed ball of given radius about the origin.
  Eigen::VectorXd ball(int d, double radius) {
    double r = radius * std::pow(uniform(), 1.0 / d);
    return r * unit_vector(d);
  }

 private:
  struct raw {};
  Rng(raw, std::uint64_t key) : key_(mix64(key)) {}

  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace crackle
