#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace arw {

// SplitMix64 scrambler (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based substream: the state is derived from (master seed, stream
// index) alone, so trial t is reproducible independently of execution order
// and worker count. Normals come from Box-Muller on 53-bit uniforms, which
// keeps the draw sequence platform-stable (std::normal_distribution is not).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t k = master_seed;
    std::uint64_t a = splitmix64_next(k);
    k = stream_index ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t b = splitmix64_next(k);
    state_ = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // uniform on (0, 1]
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double c = std::cos(2.0 * M_PI * u2);
    double s = std::sin(2.0 * M_PI * u2);
    spare_ = r * s;
    have_spare_ = true;
    return r * c;
  }

  // standard complex Gaussian with E|a|^2 = 1 (components N(0, 1/2));
  // |a|^2 is exactly Exp(1) by the polar construction.
  std::complex<double> next_complex_gaussian() {
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

 private:
  std::uint64_t state_{0};
  double spare_{0.0};
  bool have_spare_{false};
};

}  // namespace arw
