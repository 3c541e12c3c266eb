#pragma once

#include <cstddef>
#include <vector>

#include "hysterion/model.hpp"
#include "hysterion/path.hpp"

namespace hyst {

struct IntegrateOptions {
  double eta = 200.0;  // steps per epsilon: dt = epsilon/eta when dt == 0
  double dt = 0.0;     // explicit step override; must be <= epsilon/2
};

// Classic fourth-order Runge-Kutta on eps dx/dt = x - x^3 + lambda(t).
// The step is shrunk so the span is a whole number of steps and the path
// lands on t1 exactly. Throws StepTooLarge (dt > eps/2) and NonFinite
// (|x| > 10, trajectory left the physical region).
Path integrate_det(const ModelParams& p, double x0, double t0, double t1,
                   const IntegrateOptions& opts = {});

enum class BranchTag { plus, minus, zero, unique };
const char* to_string(BranchTag b);

struct PeriodicOrbit {
  Path path;  // one forcing period, t in [-1/2, 1/2]
  Stability stability = Stability::stable;
  BranchTag branch = BranchTag::unique;
};

struct OrbitOptions {
  double eta = 200.0;
  double tol = 1e-10;  // period-map fixed-point tolerance
  int max_iter = 50;
  double gamma0 = 1.0;  // a0 <= gamma0*eps: three orbits
  double gamma1 = 1.0;  // a0 >= gamma1*eps: one orbit
};

// Periodic orbits of the forced system as fixed points of the period map.
// Stable orbits by forward iteration (the map contracts like exp(-c/eps)),
// the unstable one by backward-time iteration, both seeded from frozen-system
// equilibria on a section where the system is bistable. Returns 3 orbits
// (plus/zero/minus) when a0 <= gamma0*eps, 1 (unique) when a0 >= gamma1*eps.
// Throws AmbiguousRegime between the two thresholds, NoConvergence after
// max_iter sweeps.
std::vector<PeriodicOrbit> find_periodic_orbits(const ModelParams& p,
                                                const OrbitOptions& opts = {});

// Hysteresis-loop area -(1/periods) * integral of x(t) lambda'(t) dt by
// trapezoid on the path's own grid. The span must be a whole number of
// periods (BadSpan otherwise).
double det_area(const Path& path, const ModelParams& p);

// Linearization record along a deterministic path: a(t) = 1 - 3 x(t)^2,
// alpha = cumulative integral of a, and the variance-envelope profile
//   zeta(t) = e^{2 alpha(t,t0)/eps}/(2|a(t0)|)
//           + (1/eps) int_t0^t e^{2 alpha(t,s)/eps} ds,
// trapezoid-evaluated on the path grid via an overflow-safe recurrence.
struct ZetaProfile {
  double t0 = 0.0;
  double dt = 0.0;
  double epsilon = 0.0;
  std::vector<double> a;
  std::vector<double> alpha;  // alpha[k] = int_{t0}^{t_k} a(s) ds
  std::vector<double> zeta;

  // alpha(t_i, t_j) = int_{t_j}^{t_i} a(s) ds
  double alpha_between(std::size_t i, std::size_t j) const {
    return alpha[i] - alpha[j];
  }
  double zeta_max() const;
};

ZetaProfile zeta_profile(const Path& path, const ModelParams& p);

// Deterministic stand-in for the noise-triggered loop in the large-noise
// regime: ride the upper branch from -1/4 until t1 = -c1 sigma^{2/3}, restart
// on the lower branch there, ride to +1/4; twice the sum of both half-area
// integrals. Throws RegimeMismatch outside the large-noise regime and
// std::invalid_argument when t1 does not fall inside (-1/4, 0).
double reference_area(const ModelParams& p, double c1 = 1.0);

namespace detail {
// Same construction without the regime gate (for limit studies).
double reference_area_unchecked(const ModelParams& p, double c1);
}  // namespace detail

}  // namespace hyst
