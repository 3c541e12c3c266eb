#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hysterion/ensemble.hpp"
#include "hysterion/model.hpp"

namespace hyst {

// Empirical scaling laws this tool can check. Each law fixes which statistic
// is measured and which regime every grid point must classify into.
enum class LawId {
  det_small,      // deterministic loop area vs eps, small amplitude
  det_large,      // deterministic area excess over the static loop, large ampl.
  var_ia,         // area variance, small amplitude + weak noise
  var_iia,        // area variance, large amplitude + weak noise
  deficit_iii,    // median area deficit below the static loop, strong noise
  lambda0_width,  // spread of the forcing value at first sign crossing
};

enum class SweepAxis { eps, a0, sigma };

const char* to_string(LawId law);
const char* to_string(SweepAxis axis);
LawId law_from_string(const std::string& s);        // invalid_argument on typo
SweepAxis axis_from_string(const std::string& s);

// Slope each law predicts for log(statistic) against the log of the swept
// parameter; throws invalid_argument for unsupported law/axis pairs.
double theory_exponent(LawId law, SweepAxis axis);

struct SweepConfig {
  LawId law = LawId::det_small;
  SweepAxis axis = SweepAxis::eps;
  ModelParams base;             // non-swept parameter values
  std::vector<double> grid;     // swept values, strictly increasing, >= 4
  long long n_paths = 0;        // per stochastic point
  std::uint64_t seed_base = 1;
  double eta = 200.0;
  int threads = 0;
  double c1 = 0.3;              // deficit reference switch constant
  Thresholds thresholds;
};

struct SweepPoint {
  double x = 0.0;  // swept value
  ModelParams params;
  double statistic = 0.0;
  double mc_error = 0.0;  // 0 for deterministic statistics
  RegimeCase regime = RegimeCase::Ia;
  bool borderline = false;
  double extra = 0.0;  // law-specific companion (e.g. reference-area deficit)
};

// Evaluates the law's statistic at every grid point. Each point must
// classify into the law's regime (RegimeMismatch lists offenders otherwise);
// borderline points are flagged and kept.
std::vector<SweepPoint> sweep(const SweepConfig& cfg);

struct PowerLawFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double stderr_exponent = 0.0;
  double r2 = 0.0;
  long long n_points = 0;
};

// Weighted least squares on (log x, log y); weights ~ 1/relative-error^2.
// Needs >= 3 points with two distinct x; NonPositive on x <= 0 or y <= 0.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& xy,
                          const std::vector<double>& rel_errors = {});

struct ScalingReport {
  LawId law = LawId::det_small;
  SweepAxis axis = SweepAxis::eps;
  std::vector<SweepPoint> points;
  PowerLawFit fit;
  double theory = 0.0;
  double tolerance = 0.0;
  double r2_min = 0.95;
  bool pass = false;
};

// sweep + fit + verdict: pass iff |exponent - theory| <= tolerance and
// R^2 >= r2_min. The fit and R^2 are reported either way.
ScalingReport verify_scaling(const SweepConfig& cfg, double tolerance,
                             double r2_min = 0.95);

// Pinned grids and parameters for each law/axis pair.
SweepConfig default_config(LawId law, SweepAxis axis);
double default_tolerance(LawId law, SweepAxis axis);

}  // namespace hyst
