#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace intgeo {

/// One splitmix64 step. Advances the state and returns the next word.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D4A2B2F712ACFBULL;
  return z ^ (z >> 31);
}

/// An independent, reproducible random stream.
///
/// Stream derivation contract: the stream for (seed, index, attempt) is an
/// mt19937_64 engine seeded with three splitmix64 steps starting from
/// seed ^ (index * A) ^ (attempt * B), with A, B fixed odd constants.
/// The draws of a stream depend only on (seed, index, attempt), never on
/// scheduling or thread count.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt = 0) {
    std::uint64_t s = seed ^ (index * 0xD1342543DE82EF95ULL) ^
                      (attempt * 0xDB4F0B9175AE2165ULL);
    splitmix64_next(s);
    splitmix64_next(s);
    engine_.seed(splitmix64_next(s));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (deterministic for a fixed stream).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Uniform point on the unit sphere S^{n-1}.
  Eigen::VectorXd unit_vector(int n) {
    Eigen::VectorXd v = gaussian_vector(n);
    double norm = v.norm();
    while (norm < 1e-300) {
      v = gaussian_vector(n);
      norm = v.norm();
    }
    return v / norm;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace intgeo
