#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace hyst {

// Double-well model with sinusoidal forcing, slow-time form
//   eps dx/dt = x - x^3 + lambda(t),   lambda(t) = -A cos(2 pi t),
// plus additive noise of strength sigma (handled by the sde layer).
// Saddle-node bifurcations of the frozen system sit at lambda = -/+ lambda_c,
// x = +/- x_c; the forcing amplitude is measured from lambda_c by
// a0 = A - lambda_c.

inline const double kPi = 3.14159265358979323846;
inline const double kLambdaC = 2.0 / (3.0 * std::sqrt(3.0));
inline const double kXc = 1.0 / std::sqrt(3.0);
// Area of the static hysteresis loop enclosed by the two stable branches.
inline const double kStaticArea = 1.5;

struct ModelParams {
  double epsilon = 0.0;   // time-scale ratio, 0 < epsilon < 1
  double sigma = 0.0;     // noise strength, >= 0
  double amplitude = 0.0; // forcing amplitude A, > 0

  double a0() const { return amplitude - kLambdaC; }
  static ModelParams from_a0(double eps, double sigma, double a0) {
    return ModelParams{eps, sigma, kLambdaC + a0};
  }
  // Throws std::invalid_argument when out of domain.
  void validate() const;
};

inline double lambda_of(double t, double amplitude) {
  return -amplitude * std::cos(2.0 * kPi * t);
}
inline double dlambda_of(double t, double amplitude) {
  return 2.0 * kPi * amplitude * std::sin(2.0 * kPi * t);
}
inline double force(double x, double lambda) { return x - x * x * x + lambda; }
// d/dx of the drift; also the linearization coefficient a(x) = 1 - 3x^2.
inline double dforce(double x) { return 1.0 - 3.0 * x * x; }

enum class Stability { stable, unstable, marginal };

struct EquilibriumSet {
  int count = 0;                        // 1, 2 or 3
  std::array<double, 3> roots{};        // ascending; first `count` valid
  std::array<Stability, 3> stability{};
};

// Real roots of x - x^3 + lambda = 0 with stability of the frozen system.
// Roots are Newton-polished; |r - r^3 + lambda| <= 1e-12 for each.
EquilibriumSet equilibria(double lambda);

enum class RegimeCase { Ia, Ib, IIa, IIb, IIIa, IIIb };

const char* to_string(RegimeCase c);
// Coarse family: I "small amplitude", II "large amplitude", III "large noise".
const char* family_label(RegimeCase c);

struct Thresholds {
  double gamma0 = 1.0;  // a0 <= gamma0*eps: bistable all period
  double gamma1 = 1.0;  // a0 >= gamma1*eps: barrier vanishes twice a period
  // Winner margin (natural-log scale) below which the classification is
  // reported as borderline.
  double borderline_slack = 0.5;
};

struct Regime {
  RegimeCase regime_case = RegimeCase::Ia;
  bool borderline = false;
  // Smallest binding slack of the winning case, natural-log scale.
  double min_slack = 0.0;
  // Every inequality evaluated, label -> signed log slack (positive =
  // satisfied with that much room, +/-inf when a sign decides outright).
  std::vector<std::pair<std::string, double>> margins;
};

// Places parameters in one of the six asymptotic regimes by maximizing the
// minimum log-slack over each case's defining inequalities. Total: always
// returns a case, flags near-boundary parameters instead of erroring.
Regime classify(const ModelParams& p, const Thresholds& th = {});

}  // namespace hyst
