#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hyst {

// Central-moment accumulator with exact pairwise merging (Pebay update
// formulas), so a reduction tree over subsets reproduces the whole-set
// result bitwise when the splits line up.
struct MomentAccumulator {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum (x - mean)^2
  double m3 = 0.0;
  double m4 = 0.0;

  static MomentAccumulator single(double x) {
    MomentAccumulator a;
    a.n = 1;
    a.mean = x;
    return a;
  }
  static MomentAccumulator merged(const MomentAccumulator& a,
                                  const MomentAccumulator& b);

  double variance() const;         // unbiased; needs n >= 2
  double skewness() const;         // m3/n / (m2/n)^{3/2}
  double excess_kurtosis() const;  // n m4/m2^2 - 3
};

// Balanced binary reduction split at floor(n/2) on every level. The split
// choice is part of the contract: reduce(2k values) equals
// merged(reduce(first k), reduce(last k)) exactly.
MomentAccumulator reduce_moments(std::span<const double> values);

// Linear-interpolation quantile of an ascending-sorted sample.
double quantile_sorted(std::span<const double> sorted, double p);

inline constexpr std::array<double, 7> kQuantileProbs = {
    0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99};

std::array<double, 7> quantiles7(std::span<const double> sorted);

struct Histogram {
  std::vector<double> edges;        // bin k spans [edges[k], edges[k+1])
  std::vector<long long> counts;    // last bin closed on the right
};

// Freedman-Diaconis binning; degenerates to one bin when the IQR vanishes.
Histogram fd_histogram(std::span<const double> sorted);

struct WilsonInterval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  long long successes = 0;
  long long n = 0;
};

// 95% score interval by default.
WilsonInterval wilson_interval(long long successes, long long n,
                               double z = 1.959963984540054);

struct GaussianityResult {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool gaussian = false;
};

// Moment-based normality screen; needs at least 1000 samples.
GaussianityResult gaussianity_check(std::span<const double> samples,
                                    double skew_tol = 0.2,
                                    double kurt_tol = 0.5);

}  // namespace hyst
