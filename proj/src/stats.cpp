#include "hysterion/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hysterion/errors.hpp"

namespace hyst {

MomentAccumulator MomentAccumulator::merged(const MomentAccumulator& a,
                                            const MomentAccumulator& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  MomentAccumulator o;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double n = na + nb;
  const double d = b.mean - a.mean;
  o.n = a.n + b.n;
  o.mean = a.mean + d * nb / n;
  o.m2 = a.m2 + b.m2 + d * d * na * nb / n;
  o.m3 = a.m3 + b.m3 + d * d * d * na * nb * (na - nb) / (n * n) +
         3.0 * d * (na * b.m2 - nb * a.m2) / n;
  o.m4 = a.m4 + b.m4 +
         d * d * d * d * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
         6.0 * d * d * (na * na * b.m2 + nb * nb * a.m2) / (n * n) +
         4.0 * d * (na * b.m3 - nb * a.m3) / n;
  return o;
}

double MomentAccumulator::variance() const {
  return n >= 2 ? m2 / static_cast<double>(n - 1) : 0.0;
}

double MomentAccumulator::skewness() const {
  if (n < 2 || m2 <= 0.0) return 0.0;
  const double nn = static_cast<double>(n);
  return std::sqrt(nn) * m3 / std::pow(m2, 1.5);
}

double MomentAccumulator::excess_kurtosis() const {
  if (n < 2 || m2 <= 0.0) return 0.0;
  return static_cast<double>(n) * m4 / (m2 * m2) - 3.0;
}

MomentAccumulator reduce_moments(std::span<const double> values) {
  if (values.empty()) return {};
  if (values.size() == 1) return MomentAccumulator::single(values[0]);
  const std::size_t mid = values.size() / 2;
  return MomentAccumulator::merged(reduce_moments(values.first(mid)),
                                   reduce_moments(values.subspan(mid)));
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (sorted.size() == 1) return sorted[0];
  p = std::clamp(p, 0.0, 1.0);
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(h);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::array<double, 7> quantiles7(std::span<const double> sorted) {
  std::array<double, 7> out{};
  for (std::size_t i = 0; i < kQuantileProbs.size(); ++i) {
    out[i] = quantile_sorted(sorted, kQuantileProbs[i]);
  }
  return out;
}

Histogram fd_histogram(std::span<const double> sorted) {
  if (sorted.empty()) throw std::invalid_argument("histogram of empty sample");
  Histogram h;
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double iqr =
      quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double width =
      2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  std::size_t nbins = 1;
  if (width > 0.0 && hi > lo) {
    nbins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    nbins = std::clamp<std::size_t>(nbins, 1, 10000);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  h.edges.resize(nbins + 1);
  for (std::size_t i = 0; i <= nbins; ++i) {
    h.edges[i] = lo + span * static_cast<double>(i) / static_cast<double>(nbins);
  }
  h.counts.assign(nbins, 0);
  for (double v : sorted) {
    auto idx = static_cast<std::size_t>((v - lo) / span *
                                        static_cast<double>(nbins));
    idx = std::min(idx, nbins - 1);
    ++h.counts[idx];
  }
  return h;
}

WilsonInterval wilson_interval(long long successes, long long n, double z) {
  if (n <= 0) throw NoSamples("Wilson interval needs n > 0");
  WilsonInterval w;
  w.successes = successes;
  w.n = n;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = p + z2 / (2.0 * nn);
  const double rad =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  w.estimate = p;
  w.lo = std::max(0.0, (center - rad) / denom);
  w.hi = std::min(1.0, (center + rad) / denom);
  return w;
}

GaussianityResult gaussianity_check(std::span<const double> samples,
                                    double skew_tol, double kurt_tol) {
  if (samples.size() < 1000)
    throw std::invalid_argument("gaussianity_check needs at least 1000 samples");
  const MomentAccumulator acc = reduce_moments(samples);
  GaussianityResult r;
  r.skewness = acc.skewness();
  r.excess_kurtosis = acc.excess_kurtosis();
  r.gaussian =
      std::abs(r.skewness) < skew_tol && std::abs(r.excess_kurtosis) < kurt_tol;
  return r;
}

}  // namespace hyst
