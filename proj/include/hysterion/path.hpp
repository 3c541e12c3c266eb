#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hyst {

// Uniformly sampled trajectory. states[k] is x(t0 + k*dt); the last sample
// lands on t1 exactly (dt is adjusted so the span is a whole number of steps).
struct Path {
  enum class Kind { deterministic, stochastic };

  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.0;
  Kind kind = Kind::deterministic;
  std::optional<std::uint64_t> seed;  // set iff stochastic
  std::vector<double> states;

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

}  // namespace hyst
