#pragma once

#include <cstdint>

namespace hyst {

// Counter-based Gaussian noise. Every variate is a pure function of
// (seed, counter), so any step of any path can be regenerated in isolation
// and results cannot depend on thread scheduling.

// splitmix64 finalizer (Vigna's constants).
std::uint64_t mix64(std::uint64_t z);

// Uniform draw in the open interval (0, 1), 53-bit resolution.
double uniform_at(std::uint64_t seed, std::uint64_t counter);

// Standard normal draw via the AS 241 inverse CDF applied to uniform_at.
double gaussian_at(std::uint64_t seed, std::uint64_t counter);

// Inverse of the standard normal CDF (AS 241, PPND16); |error| < 1e-15
// over (0, 1). Out-of-range p yields +/-infinity.
double inverse_normal_cdf(double p);

// Decorrelates per-path streams drawn from one ensemble seed.
std::uint64_t path_seed(std::uint64_t seed_base, std::uint64_t index);

// Stateful convenience wrapper over gaussian_at.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}
  double next() { return gaussian_at(seed_, counter_++); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace hyst
