#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "hysterion/det.hpp"
#include "hysterion/errors.hpp"
#include "hysterion/model.hpp"
#include "hysterion/rng.hpp"
#include "hysterion/sde.hpp"

using namespace hyst;

namespace {

double upper_equilibrium(const ModelParams& p, double t) {
  const EquilibriumSet eq = equilibria(lambda_of(t, p.amplitude));
  return eq.roots[eq.count - 1];
}

std::vector<double> brownian_fine(std::uint64_t seed, std::size_t n, double dt) {
  std::vector<double> dw(n);
  const double s = std::sqrt(dt);
  for (std::size_t k = 0; k < n; ++k) dw[k] = s * gaussian_at(seed, k);
  return dw;
}

std::vector<double> coarsen(const std::vector<double>& dw, std::size_t factor) {
  std::vector<double> out(dw.size() / factor, 0.0);
  for (std::size_t k = 0; k < dw.size(); ++k) out[k / factor] += dw[k];
  return out;
}

}  // namespace

TEST_CASE("paths replay bitwise from their seed") {
  ModelParams p{5e-3, 0.05, 0.3};
  const double x0 = upper_equilibrium(p, -0.5);
  const Path a = simulate_path(p, x0, -0.5, 0.5, 42);
  const Path b = simulate_path(p, x0, -0.5, 0.5, 42);
  const Path c = simulate_path(p, x0, -0.5, 0.5, 43);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k)
    REQUIRE(a.states[k] == b.states[k]);
  CHECK(a.states.back() != c.states.back());
  CHECK(a.seed == 42);
  CHECK(a.kind == Path::Kind::stochastic);
}

TEST_CASE("zero noise tracks the deterministic integrator") {
  ModelParams p{1e-3, 0.0, 0.2};
  const double x0 = upper_equilibrium(p, -0.5);
  const Path em = simulate_path(p, x0, -0.5, 0.5, 7);
  IntegrateOptions io;
  io.dt = em.dt;
  const Path rk = integrate_det(p, x0, -0.5, 0.5, io);
  REQUIRE(em.states.size() == rk.states.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < em.states.size(); ++k)
    worst = std::max(worst, std::abs(em.states[k] - rk.states[k]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("simulator rejects oversized steps and diverging states") {
  ModelParams p{1e-3, 0.05, 0.2};
  SimulateOptions big;
  big.dt = p.epsilon;
  CHECK_THROWS_AS(simulate_path(p, 1.0, 0.0, 1.0, 1, big), StepTooLarge);
  CHECK_THROWS_AS(simulate_path(p, 20.0, 0.0, 1e-2, 1), NonFinite);
}

TEST_CASE("strong error halves with the step") {
  // Ratio of successive endpoint differences on one Brownian lattice: the
  // leading pathwise error is linear in dt, so d(2h)/d(h) -> 2.
  ModelParams p{5e-3, 0.1, 0.3};
  const double t0 = -0.4, t1 = -0.3;
  const double x0 = upper_equilibrium(p, t0);
  const std::size_t nf = 4096;
  const double dtf = (t1 - t0) / static_cast<double>(nf);
  double d1 = 0.0, d2 = 0.0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const auto dw = brownian_fine(1000 + static_cast<std::uint64_t>(s), nf, dtf);
    const double x16 =
        simulate_with_increments(p, x0, t0, t1, coarsen(dw, 16)).states.back();
    const double x8 =
        simulate_with_increments(p, x0, t0, t1, coarsen(dw, 8)).states.back();
    const double x4 =
        simulate_with_increments(p, x0, t0, t1, coarsen(dw, 4)).states.back();
    d1 += std::abs(x16 - x8);
    d2 += std::abs(x8 - x4);
  }
  const double ratio = d1 / d2;
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 2.5);
}

TEST_CASE("mean area bias decays linearly with the step") {
  // Mean cycle-area bias of each step against its own dt/4 refinement,
  // coupled through one Brownian lattice; halving dt should halve the bias.
  ModelParams p{5e-3, 0.1, 0.3};
  const double t0 = -0.5, t1 = 0.5;
  const double x0 = upper_equilibrium(p, t0);
  const std::size_t nf = 40000;
  const double dtf = (t1 - t0) / static_cast<double>(nf);
  double b1 = 0.0, b2 = 0.0;
  const int seeds = 400;
  for (int s = 0; s < seeds; ++s) {
    const auto dw = brownian_fine(3000 + static_cast<std::uint64_t>(s), nf, dtf);
    const double a8 =
        cycle_area(simulate_with_increments(p, x0, t0, t1, coarsen(dw, 8)), p);
    const double a4 =
        cycle_area(simulate_with_increments(p, x0, t0, t1, coarsen(dw, 4)), p);
    const double a2 =
        cycle_area(simulate_with_increments(p, x0, t0, t1, coarsen(dw, 2)), p);
    const double a1 = cycle_area(simulate_with_increments(p, x0, t0, t1, dw), p);
    b1 += a8 - a2;
    b2 += a4 - a1;
  }
  const double ratio = b1 / b2;
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.8);
}

TEST_CASE("area and crossing observables bundle consistently") {
  ModelParams p{5e-3, 0.04, 0.3};
  const double x0 = upper_equilibrium(p, -0.5);
  const Path path = simulate_path(p, x0, -0.5, 0.5, 11);
  const double area = cycle_area(path, p);
  CHECK(area == det_area(path, p));
  const CycleObservables obs = cycle_observables(path, p);
  CHECK(obs.area == area);
  CHECK(obs.seed == 11);
  const auto hit = first_crossing(path, p);
  CHECK(obs.crossed == hit.has_value());
  if (hit) {
    CHECK(obs.tau0.value() == hit->tau0);
    CHECK(obs.lambda0.value() == hit->lambda0);
  }
}

TEST_CASE("first crossing interpolates inside the hit interval") {
  ModelParams p{0.5, 0.0, 0.3};
  Path path;
  path.t0 = 0.0;
  path.t1 = 0.5;
  path.dt = 0.25;
  path.states = {0.5, 0.25, -0.25};
  const auto hit = first_crossing(path, p);
  REQUIRE(hit.has_value());
  CHECK(hit->tau0 == 1.5 * 0.25);
  CHECK(hit->lambda0 == lambda_of(hit->tau0, p.amplitude));

  Path above = path;
  above.states = {0.5, 0.3, 0.1};
  CHECK(!first_crossing(above, p).has_value());

  Path start_below = path;
  start_below.states = {-0.5, 0.3, 0.1};
  const auto hit0 = first_crossing(start_below, p);
  REQUIRE(hit0.has_value());
  CHECK(hit0->tau0 == path.t0);
  CHECK(hit0->lambda0 == lambda_of(path.t0, p.amplitude));
}

TEST_CASE("linear mode reproduces the exact relaxation variance") {
  ModelParams p{1e-3, 0.1, 0.3};
  const long long n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (long long s = 0; s < n; ++s) {
    const double x = simulate_linear(p, -1.0, 0.0, 0.0, p.epsilon,
                                     static_cast<std::uint64_t>(s))
                         .states.back();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum2 / static_cast<double>(n) - mean * mean;
  // One relaxation unit: var -> sigma^2 (1 - e^{-2})/(2|a|).
  const double exact = p.sigma * p.sigma * 0.43233235838169365;
  CHECK(std::abs(mean) < 2.5e-3);
  CHECK(var == doctest::Approx(exact).epsilon(0.04));
}
