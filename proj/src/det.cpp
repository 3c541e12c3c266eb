#include "hysterion/det.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hysterion/errors.hpp"
#include "hysterion/observables.hpp"

namespace hyst {

namespace {

constexpr double kBlowupBound = 10.0;

// RK4 over [t0, t1] with the step shrunk to divide the span exactly;
// round_to forces the step count to a multiple (grid alignment for maps).
template <typename F>
Path rk4_span(F&& f, double x0, double t0, double t1, double dt_req,
              std::size_t round_to = 1) {
  if (!(t1 > t0)) throw std::invalid_argument("integration span must be positive");
  const double span = t1 - t0;
  auto n = static_cast<std::size_t>(std::ceil(span / dt_req - 1e-9));
  n = std::max<std::size_t>(n, 1);
  n = ((n + round_to - 1) / round_to) * round_to;
  const double dt = span / static_cast<double>(n);

  Path path;
  path.t0 = t0;
  path.t1 = t1;
  path.dt = dt;
  path.kind = Path::Kind::deterministic;
  path.states.resize(n + 1);

  double x = x0;
  path.states[0] = x;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const double k1 = f(t, x);
    const double k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
    const double k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
    const double k4 = f(t + dt, x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(std::abs(x) <= kBlowupBound)) {
      std::ostringstream msg;
      msg << "state left |x| <= " << kBlowupBound << " near t = " << t + dt;
      throw NonFinite(msg.str());
    }
    path.states[k + 1] = x;
  }
  return path;
}

double resolve_dt(const ModelParams& p, const IntegrateOptions& opts) {
  const double dt = opts.dt > 0.0 ? opts.dt : p.epsilon / opts.eta;
  if (dt > p.epsilon / 2.0) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds epsilon/2 = " << p.epsilon / 2.0;
    throw StepTooLarge(msg.str());
  }
  return dt;
}

}  // namespace

Path integrate_det(const ModelParams& p, double x0, double t0, double t1,
                   const IntegrateOptions& opts) {
  p.validate();
  const double dt = resolve_dt(p, opts);
  const double eps = p.epsilon;
  const double amp = p.amplitude;
  auto f = [eps, amp](double t, double x) {
    return force(x, lambda_of(t, amp)) / eps;
  };
  return rk4_span(f, x0, t0, t1, dt);
}

const char* to_string(BranchTag b) {
  switch (b) {
    case BranchTag::plus: return "plus";
    case BranchTag::minus: return "minus";
    case BranchTag::zero: return "zero";
    case BranchTag::unique: return "unique";
  }
  return "?";
}

namespace {

// One forward period from section time s.
template <typename F>
double period_map_end(F&& rhs, double x, double s, double dt_req) {
  return rk4_span(rhs, x, s, s + 1.0, dt_req, 4).states.back();
}

template <typename MapEnd>
double fixed_point(MapEnd&& map_end, double x_init, double tol, int max_iter) {
  double x = x_init;
  for (int it = 0; it < max_iter; ++it) {
    const double px = map_end(x);
    if (std::abs(px - x) < tol) return px;
    x = px;
  }
  throw NoConvergence("period-map iteration did not converge");
}

// Rebuild a one-period orbit on the canonical grid t in [-1/2, 1/2] from a
// single period integrated from section t = 1/4. fwd: y[j] = x(1/4 + j dt);
// bwd: y[j] = x(1/4 - j dt). Index arithmetic assumes steps % 4 == 0.
Path remap_quarter_section(const Path& y, bool backward) {
  const std::size_t n = y.steps();
  Path out;
  out.t0 = -0.5;
  out.t1 = 0.5;
  out.dt = y.dt;
  out.kind = Path::Kind::deterministic;
  out.states.resize(n + 1);
  const std::size_t q = n / 4;
  for (std::size_t k = 0; k <= n; ++k) {
    std::size_t j;
    if (!backward) {
      j = k <= 3 * q ? k + q : k - 3 * q;
    } else {
      j = k <= 3 * q ? 3 * q - k : 7 * q - k;
    }
    out.states[k] = y.states[j];
  }
  return out;
}

}  // namespace

std::vector<PeriodicOrbit> find_periodic_orbits(const ModelParams& p,
                                                const OrbitOptions& opts) {
  p.validate();
  const double eps = p.epsilon;
  const double amp = p.amplitude;
  const double a0 = p.a0();
  if (a0 > opts.gamma0 * eps && a0 < opts.gamma1 * eps) {
    std::ostringstream msg;
    msg << "a0 = " << a0 << " sits between gamma0*eps = " << opts.gamma0 * eps
        << " and gamma1*eps = " << opts.gamma1 * eps
        << "; orbit count not classifiable";
    throw AmbiguousRegime(msg.str());
  }
  const double dt_req = eps / opts.eta;
  auto rhs = [eps, amp](double t, double x) {
    return force(x, lambda_of(t, amp)) / eps;
  };
  // Time-reversed field, tau increasing as t runs backwards from section s.
  auto make_rev = [eps, amp](double s) {
    return [eps, amp, s](double tau, double x) {
      return -force(x, lambda_of(s - tau, amp)) / eps;
    };
  };

  std::vector<PeriodicOrbit> orbits;
  if (a0 >= opts.gamma1 * eps) {
    // Single orbit; the frozen system at lambda(-1/2) = A has one root.
    const EquilibriumSet eq = equilibria(lambda_of(-0.5, amp));
    auto map_end = [&](double x) { return period_map_end(rhs, x, -0.5, dt_req); };
    const double xf = fixed_point(map_end, eq.roots[0], opts.tol, opts.max_iter);
    PeriodicOrbit orb;
    orb.path = rk4_span(rhs, xf, -0.5, 0.5, dt_req, 4);
    orb.stability = Stability::stable;
    orb.branch = BranchTag::unique;
    orbits.push_back(std::move(orb));
    return orbits;
  }

  // Three orbits. Seed on the section t = 1/4 where lambda = 0 and the
  // frozen system is always bistable with equilibria -1, 0, +1.
  for (const auto& [seed, tag] : {std::pair{1.0, BranchTag::plus},
                                  std::pair{0.0, BranchTag::zero},
                                  std::pair{-1.0, BranchTag::minus}}) {
    PeriodicOrbit orb;
    orb.branch = tag;
    if (tag == BranchTag::zero) {
      auto rev = make_rev(0.25);
      auto map_end = [&](double x) {
        return rk4_span(rev, x, 0.0, 1.0, dt_req, 4).states.back();
      };
      const double xf = fixed_point(map_end, seed, opts.tol, opts.max_iter);
      orb.path = remap_quarter_section(rk4_span(rev, xf, 0.0, 1.0, dt_req, 4),
                                       /*backward=*/true);
      orb.stability = Stability::unstable;
    } else {
      auto map_end = [&](double x) { return period_map_end(rhs, x, 0.25, dt_req); };
      const double xf = fixed_point(map_end, seed, opts.tol, opts.max_iter);
      orb.path = remap_quarter_section(rk4_span(rhs, xf, 0.25, 1.25, dt_req, 4),
                                       /*backward=*/false);
      orb.stability = Stability::stable;
    }
    orbits.push_back(std::move(orb));
  }
  return orbits;
}

double det_area(const Path& path, const ModelParams& p) {
  if (path.states.size() < 2) throw BadSpan("path has no steps");
  const double span = path.dt * static_cast<double>(path.steps());
  const double periods = std::round(span);
  if (periods < 0.5 || std::abs(span - periods) > 1e-9) {
    std::ostringstream msg;
    msg << "span " << span << " is not a whole number of periods";
    throw BadSpan(msg.str());
  }
  detail::AreaAccum acc;
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    acc.feed(path.states[k] * dlambda_of(path.time_at(k), p.amplitude));
  }
  return acc.per_period(path.dt, periods);
}

double ZetaProfile::zeta_max() const {
  return zeta.empty() ? 0.0 : *std::max_element(zeta.begin(), zeta.end());
}

ZetaProfile zeta_profile(const Path& path, const ModelParams& p) {
  if (path.kind != Path::Kind::deterministic)
    throw std::invalid_argument("zeta_profile needs a deterministic path");
  if (path.states.size() < 2)
    throw std::invalid_argument("zeta_profile needs a nonempty path");
  p.validate();
  const std::size_t m = path.states.size();
  ZetaProfile zp;
  zp.t0 = path.t0;
  zp.dt = path.dt;
  zp.epsilon = p.epsilon;
  zp.a.resize(m);
  zp.alpha.resize(m);
  zp.zeta.resize(m);
  for (std::size_t k = 0; k < m; ++k) zp.a[k] = dforce(path.states[k]);
  zp.alpha[0] = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    zp.alpha[k + 1] = zp.alpha[k] + 0.5 * path.dt * (zp.a[k] + zp.a[k + 1]);
  }
  // zeta(t_k) = e^{2 alpha_k/eps}/(2|a_0|) + R_k/eps with R_k the trapezoid
  // of e^{2(alpha_k - alpha(s))/eps} over [t0, t_k]. R is carried forward
  // incrementally so no intermediate exponential overflows on stable paths.
  const double inv_eps = 1.0 / p.epsilon;
  const double lead0 = 1.0 / (2.0 * std::abs(zp.a[0]));
  zp.zeta[0] = lead0;
  double r = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double g = std::exp(2.0 * (zp.alpha[k + 1] - zp.alpha[k]) * inv_eps);
    r = g * (r + 0.5 * path.dt) + 0.5 * path.dt;
    zp.zeta[k + 1] =
        std::exp(2.0 * zp.alpha[k + 1] * inv_eps) * lead0 + r * inv_eps;
  }
  return zp;
}

namespace detail {

double reference_area_unchecked(const ModelParams& p, double c1) {
  if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
  const double t1 = -c1 * std::pow(p.sigma, 2.0 / 3.0);
  const double dt = p.epsilon / 200.0;
  if (!(t1 < 0.0) || t1 <= -0.25 + dt) {
    std::ostringstream msg;
    msg << "branch switch time t1 = " << t1
        << " must fall inside (-1/4, 0); shrink c1 or sigma";
    throw std::invalid_argument(msg.str());
  }
  auto partial = [&p](const Path& path) {
    detail::AreaAccum acc;
    for (std::size_t k = 0; k < path.states.size(); ++k) {
      acc.feed(path.states[k] * dlambda_of(path.time_at(k), p.amplitude));
    }
    return acc.partial(path.dt);
  };
  // Upper branch from the neutral point lambda(-1/4) = 0 down to t1.
  const Path upper = integrate_det(p, equilibria(0.0).roots[2], -0.25, t1);
  // Lower branch restarted at t1 from the frozen lower equilibrium.
  const EquilibriumSet eq1 = equilibria(lambda_of(t1, p.amplitude));
  const Path lower = integrate_det(p, eq1.roots[0], t1, 0.25);
  return 2.0 * (partial(upper) + partial(lower));
}

}  // namespace detail

double reference_area(const ModelParams& p, double c1) {
  p.validate();
  const Regime reg = classify(p);
  if (reg.regime_case != RegimeCase::IIIa && reg.regime_case != RegimeCase::IIIb) {
    std::ostringstream msg;
    msg << "reference_area needs the large-noise regime, got "
        << to_string(reg.regime_case);
    throw RegimeMismatch(msg.str());
  }
  return detail::reference_area_unchecked(p, c1);
}

}  // namespace hyst
