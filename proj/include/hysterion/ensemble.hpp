#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hysterion/model.hpp"
#include "hysterion/sde.hpp"
#include "hysterion/stats.hpp"

namespace hyst {

struct EnsembleOptions {
  long long n = 0;                // paths; >= 2
  std::uint64_t seed_base = 1;
  std::uint64_t index_offset = 0; // global index of the first path
  double t0 = -0.5;
  double span = 1.0;              // whole number of periods
  double eta = 200.0;
  std::optional<double> x0;       // default: upper stable frozen equilibrium
  double crossing_level = 0.0;
  int threads = 0;                // 0: HYSTERION_THREADS env, else hardware
  bool keep_samples = false;
};

struct ObservableStats {
  long long n = 0;                 // samples behind these numbers
  MomentAccumulator moments;
  std::array<double, 7> quantiles{};  // at kQuantileProbs
  double min = 0.0;
  double max = 0.0;
};

struct EnsembleSummary {
  long long n = 0;
  std::uint64_t seed_base = 0;
  std::uint64_t index_offset = 0;
  double t0 = 0.0;
  double span = 0.0;
  double dt = 0.0;
  double x0 = 0.0;

  ObservableStats area;
  ObservableStats tau0;     // over paths that crossed
  ObservableStats lambda0;  // over paths that crossed
  long long crossed = 0;
  double crossing_rate = 0.0;
  Histogram area_hist;

  bool has_samples = false;
  std::vector<CycleObservables> samples;  // index order; iff keep_samples
};

// Runs n independent paths (path i reproducible from
// path_seed(seed_base, index_offset + i)) and reduces their cycle
// observables deterministically: per-path results land in an index-addressed
// array, moments reduce over a fixed balanced tree, quantiles and histograms
// come from sorted copies. The summary is byte-identical for every thread
// count. NonFinite from any path is rethrown with its seed.
EnsembleSummary run_ensemble(const ModelParams& p, const EnsembleOptions& opts);

// Combines two summaries that retained their samples (NoSamples otherwise).
// With matching seed_base and adjacent index ranges this reproduces the
// single bigger run bitwise.
EnsembleSummary merge_summaries(const EnsembleSummary& a,
                                const EnsembleSummary& b);

// P(|v| >= threshold) over the given values with a Wilson 95% interval.
WilsonInterval tail_probability(const std::vector<double>& values,
                                double threshold);

// Resolves the effective worker count the way run_ensemble does.
int resolve_threads(int requested);

}  // namespace hyst
