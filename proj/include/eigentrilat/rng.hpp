#ifndef EIGENTRILAT_RNG_HPP
#define EIGENTRILAT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include "eigentrilat/types.hpp"

namespace eigentrilat {

// Counter-seeded generator with a gaussian source. Results depend only on
// the seed and the call sequence, never on threading or platform, so
// experiments replay bit-exactly.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1p-53; }

  // Standard normal via the Box-Muller pair, second value cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  Vec normal_vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  friend SplitMix64 fork_rng(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter);

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Independent child generator for (seed, stream, counter). Forking is a
// pure function of the triple, so trial k draws the same numbers whether
// trials run serially or fanned out over threads.
inline SplitMix64 fork_rng(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) {
  std::uint64_t s =
      SplitMix64::mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
  s = SplitMix64::mix(s + 0xd1b54a32d192ed03ULL * (counter + 1));
  return SplitMix64(s);
}

}  // namespace eigentrilat

#endif
