#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "hysterion/model.hpp"

namespace hyst::detail {

// One tamed Euler-Maruyama update. Kept in one place so the single-path
// simulator and the ensemble kernel perform bit-identical arithmetic.
inline double tamed_step(double x, double lam, double z, double dt_over_eps,
                         double noise_coef) {
  const double d = dt_over_eps * force(x, lam);
  return x + d / (1.0 + (d < 0.0 ? -d : d)) + noise_coef * z;
}

// Streaming trapezoid of -x(t) lambda'(t). Both the stored-path area
// routines and the ensemble kernel feed samples through this exact
// accumulator, so an ensemble entry and its replayed path agree bitwise.
struct AreaAccum {
  double sum = 0.0;
  double prev = 0.0;
  bool first = true;

  void feed(double f) {
    if (first) {
      prev = f;
      first = false;
    } else {
      sum += prev + f;
      prev = f;
    }
  }
  // Whole-period area, normalized per period.
  double per_period(double dt, double periods) const {
    return -0.5 * dt * sum / periods;
  }
  // Raw partial integral (no period normalization).
  double partial(double dt) const { return -0.5 * dt * sum; }
};

// Streaming detector of the first grid interval where the state reaches
// `level` from above; the crossing time is linearly interpolated inside it.
struct CrossingDetect {
  double level = 0.0;
  bool found = false;
  std::size_t k_hit = 0;
  double x_before = 0.0;
  double x_hit = 0.0;
  std::size_t fed = 0;

  explicit CrossingDetect(double level_) : level(level_) {}

  void feed(double x) {
    if (!found) {
      if (x <= level) {
        found = true;
        k_hit = fed;
        x_hit = x;
      } else {
        x_before = x;
      }
    }
    ++fed;
  }

  // (tau, lambda(tau)) or nothing if the level was never reached.
  std::optional<std::pair<double, double>> result(double t0, double dt,
                                                  double amplitude) const {
    if (!found) return std::nullopt;
    double tau = t0;
    if (k_hit > 0) {
      const double frac = (x_before - level) / (x_before - x_hit);
      tau = t0 + (static_cast<double>(k_hit - 1) + frac) * dt;
    }
    return std::make_pair(tau, lambda_of(tau, amplitude));
  }
};

}  // namespace hyst::detail
