#include "hysterion/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hysterion/errors.hpp"
#include "hysterion/observables.hpp"
#include "hysterion/rng.hpp"

namespace hyst {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HYSTERION_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096)
      return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

constexpr double kBlowupBound = 10.0;

struct ForcingGrids {
  std::vector<double> lam;
  std::vector<double> dlam;
};

EnsembleSummary summarize_observables(std::vector<CycleObservables>&& obs,
                                      const EnsembleSummary& shell,
                                      bool keep_samples) {
  EnsembleSummary out = shell;
  out.n = static_cast<long long>(obs.size());

  std::vector<double> areas;
  areas.reserve(obs.size());
  std::vector<double> taus;
  std::vector<double> lambdas;
  for (const CycleObservables& o : obs) {
    areas.push_back(o.area);
    if (o.crossed) {
      taus.push_back(*o.tau0);
      lambdas.push_back(*o.lambda0);
    }
  }
  out.crossed = static_cast<long long>(taus.size());
  out.crossing_rate =
      out.n > 0 ? static_cast<double>(out.crossed) / static_cast<double>(out.n)
                : 0.0;

  // summarize() sorts in place; moments are taken before sorting, so the
  // reduction tree sees index order, which is what merge equality needs.
  std::vector<double> area_sorted = areas;
  out.area.n = static_cast<long long>(areas.size());
  out.area.moments = reduce_moments(areas);
  std::sort(area_sorted.begin(), area_sorted.end());
  out.area.quantiles = quantiles7(area_sorted);
  out.area.min = area_sorted.front();
  out.area.max = area_sorted.back();
  out.area_hist = fd_histogram(area_sorted);

  if (!taus.empty()) {
    std::vector<double> tau_sorted = taus;
    out.tau0.n = static_cast<long long>(taus.size());
    out.tau0.moments = reduce_moments(taus);
    std::sort(tau_sorted.begin(), tau_sorted.end());
    out.tau0.quantiles = quantiles7(tau_sorted);
    out.tau0.min = tau_sorted.front();
    out.tau0.max = tau_sorted.back();

    std::vector<double> lam_sorted = lambdas;
    out.lambda0.n = static_cast<long long>(lambdas.size());
    out.lambda0.moments = reduce_moments(lambdas);
    std::sort(lam_sorted.begin(), lam_sorted.end());
    out.lambda0.quantiles = quantiles7(lam_sorted);
    out.lambda0.min = lam_sorted.front();
    out.lambda0.max = lam_sorted.back();
  }

  out.has_samples = keep_samples;
  if (keep_samples) out.samples = std::move(obs);
  return out;
}

}  // namespace

EnsembleSummary run_ensemble(const ModelParams& p, const EnsembleOptions& opts) {
  p.validate();
  if (opts.n < 2) throw std::invalid_argument("ensemble needs n >= 2");
  const double periods = std::round(opts.span);
  if (periods < 0.5 || std::abs(opts.span - periods) > 1e-9)
    throw BadSpan("ensemble span must be a whole number of periods");

  const double eps = p.epsilon;
  const double amp = p.amplitude;
  const double dt_req = eps / opts.eta;
  if (dt_req > eps / 2.0) throw StepTooLarge("eta below 2 steps per epsilon");
  const auto n_steps = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(opts.span / dt_req - 1e-9)), 1);
  const double dt = opts.span / static_cast<double>(n_steps);

  const double x0 = opts.x0.has_value() ? *opts.x0 : [&] {
    const EquilibriumSet eq = equilibria(lambda_of(opts.t0, amp));
    return eq.roots[eq.count - 1];
  }();

  // Shared forcing tables; the arithmetic matches simulate_path exactly.
  ForcingGrids grids;
  grids.lam.resize(n_steps + 1);
  grids.dlam.resize(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = opts.t0 + static_cast<double>(k) * dt;
    grids.lam[k] = lambda_of(t, amp);
    grids.dlam[k] = dlambda_of(t, amp);
  }

  const double dt_over_eps = dt / eps;
  const double noise_coef = p.sigma * std::sqrt(dt / eps);
  const double level = opts.crossing_level;

  std::vector<CycleObservables> obs(static_cast<std::size_t>(opts.n));
  std::atomic<long long> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> stop{false};

  auto run_one = [&](long long i) {
    const std::uint64_t seed =
        path_seed(opts.seed_base, opts.index_offset + static_cast<std::uint64_t>(i));
    double x = x0;
    detail::AreaAccum area;
    detail::CrossingDetect cross(level);
    area.feed(x * grids.dlam[0]);
    cross.feed(x);
    for (std::size_t k = 0; k < n_steps; ++k) {
      x = detail::tamed_step(x, grids.lam[k], gaussian_at(seed, k), dt_over_eps,
                             noise_coef);
      if (!(std::abs(x) <= kBlowupBound)) {
        std::ostringstream msg;
        msg << "state left |x| <= " << kBlowupBound << " near t = "
            << opts.t0 + static_cast<double>(k + 1) * dt << " (path " << i
            << ", seed " << seed << ")";
        throw NonFinite(msg.str());
      }
      area.feed(x * grids.dlam[k + 1]);
      cross.feed(x);
    }
    CycleObservables o;
    o.area = area.per_period(dt, periods);
    if (const auto c = cross.result(opts.t0, dt, amp)) {
      o.tau0 = c->first;
      o.lambda0 = c->second;
      o.crossed = true;
    }
    o.seed = seed;
    return o;
  };

  const int threads = std::min<long long>(resolve_threads(opts.threads), opts.n);
  constexpr long long kChunk = 64;
  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const long long i0 = cursor.fetch_add(kChunk, std::memory_order_relaxed);
      if (i0 >= opts.n) return;
      const long long i1 = std::min(i0 + kChunk, opts.n);
      try {
        for (long long i = i0; i < i1; ++i)
          obs[static_cast<std::size_t>(i)] = run_one(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  EnsembleSummary shell;
  shell.seed_base = opts.seed_base;
  shell.index_offset = opts.index_offset;
  shell.t0 = opts.t0;
  shell.span = opts.span;
  shell.dt = dt;
  shell.x0 = x0;
  return summarize_observables(std::move(obs), shell, opts.keep_samples);
}

EnsembleSummary merge_summaries(const EnsembleSummary& a,
                                const EnsembleSummary& b) {
  if (!a.has_samples || !b.has_samples)
    throw NoSamples("merge needs summaries built with keep_samples");
  if (a.dt != b.dt || a.t0 != b.t0 || a.span != b.span)
    throw std::invalid_argument("merge needs summaries over the same window");

  std::vector<CycleObservables> obs;
  obs.reserve(a.samples.size() + b.samples.size());
  obs.insert(obs.end(), a.samples.begin(), a.samples.end());
  obs.insert(obs.end(), b.samples.begin(), b.samples.end());

  EnsembleSummary shell;
  shell.seed_base = a.seed_base;
  shell.index_offset = a.index_offset;
  shell.t0 = a.t0;
  shell.span = a.span;
  shell.dt = a.dt;
  shell.x0 = a.x0;
  return summarize_observables(std::move(obs), shell, true);
}

WilsonInterval tail_probability(const std::vector<double>& values,
                                double threshold) {
  if (values.empty()) throw NoSamples("tail_probability needs samples");
  long long hits = 0;
  for (double v : values) {
    if (std::abs(v) >= threshold) ++hits;
  }
  return wilson_interval(hits, static_cast<long long>(values.size()));
}

}  // namespace hyst
