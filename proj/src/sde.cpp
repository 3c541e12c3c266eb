#include "hysterion/sde.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hysterion/det.hpp"
#include "hysterion/errors.hpp"
#include "hysterion/observables.hpp"
#include "hysterion/rng.hpp"

namespace hyst {

namespace {

constexpr double kBlowupBound = 10.0;

struct StepPlan {
  std::size_t n = 0;
  double dt = 0.0;
};

StepPlan plan_steps(const ModelParams& p, double t0, double t1,
                    const SimulateOptions& opts) {
  if (!(t1 > t0)) throw std::invalid_argument("t1 must exceed t0");
  const double dt_req = opts.dt > 0.0 ? opts.dt : p.epsilon / opts.eta;
  if (dt_req > p.epsilon / 2.0) {
    std::ostringstream msg;
    msg << "dt = " << dt_req << " exceeds epsilon/2 = " << p.epsilon / 2.0;
    throw StepTooLarge(msg.str());
  }
  StepPlan plan;
  const double span = t1 - t0;
  plan.n = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(span / dt_req - 1e-9)), 1);
  plan.dt = span / static_cast<double>(plan.n);
  return plan;
}

[[noreturn]] void throw_nonfinite(double t, std::uint64_t seed) {
  std::ostringstream msg;
  msg << "state left |x| <= " << kBlowupBound << " near t = " << t
      << " (seed " << seed << ")";
  throw NonFinite(msg.str());
}

}  // namespace

Path simulate_path(const ModelParams& p, double x0, double t0, double t1,
                   std::uint64_t seed, const SimulateOptions& opts) {
  p.validate();
  const StepPlan plan = plan_steps(p, t0, t1, opts);
  const double dt_over_eps = plan.dt / p.epsilon;
  const double noise_coef = p.sigma * std::sqrt(plan.dt / p.epsilon);
  const double amp = p.amplitude;

  Path path;
  path.t0 = t0;
  path.t1 = t1;
  path.dt = plan.dt;
  path.kind = Path::Kind::stochastic;
  path.seed = seed;
  path.states.resize(plan.n + 1);

  double x = x0;
  path.states[0] = x;
  for (std::size_t k = 0; k < plan.n; ++k) {
    const double t = t0 + static_cast<double>(k) * plan.dt;
    x = detail::tamed_step(x, lambda_of(t, amp), gaussian_at(seed, k),
                           dt_over_eps, noise_coef);
    if (!(std::abs(x) <= kBlowupBound)) throw_nonfinite(t + plan.dt, seed);
    path.states[k + 1] = x;
  }
  return path;
}

Path simulate_with_increments(const ModelParams& p, double x0, double t0,
                              double t1, const std::vector<double>& dw,
                              std::uint64_t seed_label) {
  p.validate();
  if (dw.empty()) throw std::invalid_argument("need at least one increment");
  if (!(t1 > t0)) throw std::invalid_argument("t1 must exceed t0");
  const std::size_t n = dw.size();
  const double dt = (t1 - t0) / static_cast<double>(n);
  if (dt > p.epsilon / 2.0) throw StepTooLarge("dt exceeds epsilon/2");
  const double dt_over_eps = dt / p.epsilon;
  // Raw increments carry their own sqrt(dt); only sigma/sqrt(eps) scales them.
  const double noise_coef = p.sigma / std::sqrt(p.epsilon);
  const double amp = p.amplitude;

  Path path;
  path.t0 = t0;
  path.t1 = t1;
  path.dt = dt;
  path.kind = Path::Kind::stochastic;
  path.seed = seed_label;
  path.states.resize(n + 1);

  double x = x0;
  path.states[0] = x;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    x = detail::tamed_step(x, lambda_of(t, amp), dw[k], dt_over_eps, noise_coef);
    if (!(std::abs(x) <= kBlowupBound)) throw_nonfinite(t + dt, seed_label);
    path.states[k + 1] = x;
  }
  return path;
}

Path simulate_linear(const ModelParams& p, double a, double x0, double t0,
                     double t1, std::uint64_t seed,
                     const SimulateOptions& opts) {
  p.validate();
  const StepPlan plan = plan_steps(p, t0, t1, opts);
  const double h = plan.dt / p.epsilon;
  const double noise_coef = p.sigma * std::sqrt(plan.dt / p.epsilon);

  Path path;
  path.t0 = t0;
  path.t1 = t1;
  path.dt = plan.dt;
  path.kind = Path::Kind::stochastic;
  path.seed = seed;
  path.states.resize(plan.n + 1);

  double x = x0;
  path.states[0] = x;
  for (std::size_t k = 0; k < plan.n; ++k) {
    x += h * a * x + noise_coef * gaussian_at(seed, k);
    if (!(std::abs(x) <= kBlowupBound))
      throw_nonfinite(t0 + static_cast<double>(k + 1) * plan.dt, seed);
    path.states[k + 1] = x;
  }
  return path;
}

double cycle_area(const Path& path, const ModelParams& p) {
  return det_area(path, p);
}

std::optional<Crossing> first_crossing(const Path& path, const ModelParams& p,
                                       double level) {
  if (path.states.empty()) throw std::invalid_argument("empty path");
  detail::CrossingDetect det(level);
  for (double x : path.states) det.feed(x);
  const auto hit = det.result(path.t0, path.dt, p.amplitude);
  if (!hit) return std::nullopt;
  return Crossing{hit->first, hit->second};
}

CycleObservables cycle_observables(const Path& path, const ModelParams& p,
                                   double level) {
  CycleObservables obs;
  obs.area = cycle_area(path, p);
  if (const auto c = first_crossing(path, p, level)) {
    obs.tau0 = c->tau0;
    obs.lambda0 = c->lambda0;
    obs.crossed = true;
  }
  obs.seed = path.seed.value_or(0);
  return obs;
}

}  // namespace hyst
