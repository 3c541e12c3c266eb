#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "hysterion/ensemble.hpp"
#include "hysterion/errors.hpp"
#include "hysterion/model.hpp"
#include "hysterion/rng.hpp"
#include "hysterion/sde.hpp"

using namespace hyst;

namespace {

void check_stats_equal(const ObservableStats& a, const ObservableStats& b) {
  CHECK(a.n == b.n);
  CHECK(a.moments.n == b.moments.n);
  CHECK(a.moments.mean == b.moments.mean);
  CHECK(a.moments.m2 == b.moments.m2);
  CHECK(a.moments.m3 == b.moments.m3);
  CHECK(a.moments.m4 == b.moments.m4);
  for (std::size_t i = 0; i < a.quantiles.size(); ++i)
    CHECK(a.quantiles[i] == b.quantiles[i]);
  CHECK(a.min == b.min);
  CHECK(a.max == b.max);
}

void check_summaries_equal(const EnsembleSummary& a, const EnsembleSummary& b) {
  CHECK(a.n == b.n);
  CHECK(a.dt == b.dt);
  CHECK(a.x0 == b.x0);
  check_stats_equal(a.area, b.area);
  check_stats_equal(a.tau0, b.tau0);
  check_stats_equal(a.lambda0, b.lambda0);
  CHECK(a.crossed == b.crossed);
  CHECK(a.crossing_rate == b.crossing_rate);
  REQUIRE(a.area_hist.counts.size() == b.area_hist.counts.size());
  for (std::size_t i = 0; i < a.area_hist.counts.size(); ++i)
    CHECK(a.area_hist.counts[i] == b.area_hist.counts[i]);
}

}  // namespace

TEST_CASE("summary is identical for every thread count") {
  ModelParams p = ModelParams::from_a0(5e-3, 0.04, 0.04);
  EnsembleOptions base;
  base.n = 400;
  base.seed_base = 99;
  EnsembleOptions o1 = base, o2 = base, o8 = base;
  o1.threads = 1;
  o2.threads = 2;
  o8.threads = 8;
  const EnsembleSummary s1 = run_ensemble(p, o1);
  const EnsembleSummary s2 = run_ensemble(p, o2);
  const EnsembleSummary s8 = run_ensemble(p, o8);
  check_summaries_equal(s1, s2);
  check_summaries_equal(s1, s8);
}

TEST_CASE("every retained sample replays from its own seed") {
  ModelParams p = ModelParams::from_a0(5e-3, 0.08, 0.04);
  EnsembleOptions opts;
  opts.n = 16;
  opts.seed_base = 12345;
  opts.index_offset = 3;
  opts.keep_samples = true;
  opts.threads = 2;
  const EnsembleSummary s = run_ensemble(p, opts);
  REQUIRE(s.has_samples);
  REQUIRE(s.samples.size() == 16);
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const CycleObservables& got = s.samples[i];
    CHECK(got.seed == path_seed(opts.seed_base, opts.index_offset + i));
    const Path path = simulate_path(p, s.x0, s.t0, s.t0 + s.span, got.seed);
    REQUIRE(path.dt == s.dt);
    const CycleObservables replay = cycle_observables(path, p);
    CHECK(replay.area == got.area);
    CHECK(replay.crossed == got.crossed);
    if (got.crossed) {
      CHECK(replay.tau0.value() == got.tau0.value());
      CHECK(replay.lambda0.value() == got.lambda0.value());
    }
  }
}

TEST_CASE("merging adjacent halves reproduces the single run") {
  ModelParams p = ModelParams::from_a0(5e-3, 0.04, 0.04);
  EnsembleOptions whole;
  whole.n = 200;
  whole.seed_base = 7;
  whole.keep_samples = true;
  EnsembleOptions lo = whole, hi = whole;
  lo.n = 100;
  hi.n = 100;
  hi.index_offset = 100;
  const EnsembleSummary sw = run_ensemble(p, whole);
  const EnsembleSummary sm =
      merge_summaries(run_ensemble(p, lo), run_ensemble(p, hi));
  check_summaries_equal(sw, sm);
  REQUIRE(sm.samples.size() == sw.samples.size());
  for (std::size_t i = 0; i < sw.samples.size(); ++i)
    CHECK(sm.samples[i].seed == sw.samples[i].seed);

  EnsembleOptions bare = lo;
  bare.keep_samples = false;
  const EnsembleSummary no_samples = run_ensemble(p, bare);
  CHECK_THROWS_AS(merge_summaries(no_samples, sm), NoSamples);

  EnsembleSummary other = run_ensemble(p, lo);
  other.dt *= 2.0;
  CHECK_THROWS_AS(merge_summaries(other, sm), std::invalid_argument);
}

TEST_CASE("default start point is the upper frozen equilibrium") {
  ModelParams p = ModelParams::from_a0(5e-3, 0.04, -0.05);
  EnsembleOptions opts;
  opts.n = 2;
  const EnsembleSummary s = run_ensemble(p, opts);
  const EquilibriumSet eq = equilibria(lambda_of(opts.t0, p.amplitude));
  CHECK(s.x0 == eq.roots[eq.count - 1]);
}

TEST_CASE("crossing rate saturates with large noise and vanishes without") {
  ModelParams loud = ModelParams::from_a0(5e-3, 0.16, -0.01);
  EnsembleOptions opts;
  opts.n = 200;
  opts.seed_base = 31;
  const EnsembleSummary s = run_ensemble(loud, opts);
  CHECK(s.crossed >= 180);
  CHECK(s.crossing_rate == static_cast<double>(s.crossed) / 200.0);

  ModelParams quiet = ModelParams::from_a0(5e-3, 0.001, -0.1);
  EnsembleOptions few = opts;
  few.n = 100;
  const EnsembleSummary q = run_ensemble(quiet, few);
  CHECK(q.crossed == 0);
  CHECK(q.tau0.n == 0);
}

TEST_CASE("option validation") {
  ModelParams p = ModelParams::from_a0(5e-3, 0.04, 0.04);
  EnsembleOptions opts;
  opts.n = 1;
  CHECK_THROWS_AS(run_ensemble(p, opts), std::invalid_argument);
  opts.n = 4;
  opts.span = 0.5;
  CHECK_THROWS_AS(run_ensemble(p, opts), BadSpan);
  opts.span = 1.0;
  opts.eta = 1.5;
  CHECK_THROWS_AS(run_ensemble(p, opts), StepTooLarge);
  opts.eta = 200.0;
  opts.x0 = 20.0;
  CHECK_THROWS_AS(run_ensemble(p, opts), NonFinite);
}

TEST_CASE("tail probability wraps the score interval") {
  const std::vector<double> v{1.0, -2.0, 0.5, 0.2};
  const WilsonInterval w = tail_probability(v, 1.0);
  CHECK(w.successes == 2);
  CHECK(w.n == 4);
  CHECK(w.estimate == 0.5);
  CHECK_THROWS_AS(tail_probability({}, 1.0), NoSamples);
}

TEST_CASE("worker count resolution order") {
  CHECK(resolve_threads(5) == 5);
  setenv("HYSTERION_THREADS", "3", 1);
  CHECK(resolve_threads(0) == 3);
  setenv("HYSTERION_THREADS", "garbage", 1);
  CHECK(resolve_threads(0) >= 1);
  unsetenv("HYSTERION_THREADS");
  CHECK(resolve_threads(0) >= 1);
}
