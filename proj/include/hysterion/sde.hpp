#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hysterion/model.hpp"
#include "hysterion/path.hpp"

namespace hyst {

// Per-cycle observables of one stochastic path: signed loop area, the first
// time the state reaches the crossing level from above (with the forcing
// value there), and the seed that regenerates the path.
struct CycleObservables {
  double area = 0.0;
  std::optional<double> tau0;
  std::optional<double> lambda0;
  bool crossed = false;
  std::uint64_t seed = 0;
};

struct SimulateOptions {
  double eta = 200.0;  // steps per epsilon when dt == 0
  double dt = 0.0;     // explicit step; must be <= epsilon/2
};

// Tamed explicit Euler-Maruyama in slow time:
//   x <- x + D/(1 + |D|) + (sigma/sqrt(eps)) dW,  D = (dt/eps) F(x, lambda).
// The k-th Gaussian increment is gaussian_at(seed, k), so the whole path is
// a pure function of (seed, t0, t1, dt) independent of threading.
// Throws StepTooLarge and NonFinite like integrate_det.
Path simulate_path(const ModelParams& p, double x0, double t0, double t1,
                   std::uint64_t seed, const SimulateOptions& opts = {});

// Same scheme driven by caller-supplied Brownian increments (one per step;
// the step is span/increments.size()). Used for refinement studies where
// coarse increments must be sums of fine ones.
Path simulate_with_increments(const ModelParams& p, double x0, double t0,
                              double t1, const std::vector<double>& dw,
                              std::uint64_t seed_label = 0);

// Plain Euler-Maruyama with the drift frozen to a*x (no cubic, no forcing):
// an Ornstein-Uhlenbeck mode whose exact law is known in closed form.
Path simulate_linear(const ModelParams& p, double a, double x0, double t0,
                     double t1, std::uint64_t seed,
                     const SimulateOptions& opts = {});

// Loop area of a stored path; span must be a whole number of periods.
double cycle_area(const Path& path, const ModelParams& p);

struct Crossing {
  double tau0 = 0.0;
  double lambda0 = 0.0;
};

// First grid interval where the state reaches `level` from above, linearly
// interpolated; nothing if the path never does. |lambda0| <= amplitude.
std::optional<Crossing> first_crossing(const Path& path, const ModelParams& p,
                                       double level = 0.0);

// Bundles area + crossing for one stored path.
CycleObservables cycle_observables(const Path& path, const ModelParams& p,
                                   double level = 0.0);

}  // namespace hyst
