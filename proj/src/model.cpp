#include "hysterion/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hysterion/errors.hpp"

namespace hyst {

namespace {
const double kInf = std::numeric_limits<double>::infinity();

// Signed log-scale slack of the inequality u <= v. Positive means satisfied
// with room to spare; the sign of an operand can settle it outright.
double slack_leq(double u, double v) {
  if (u <= 0.0) return kInf;
  if (v <= 0.0) return -kInf;
  return std::log(v) - std::log(u);
}
}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(epsilon) || epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!std::isfinite(sigma) || sigma < 0.0)
    throw std::invalid_argument("sigma must be >= 0");
  if (!std::isfinite(amplitude) || amplitude <= 0.0)
    throw std::invalid_argument("amplitude must be > 0");
}

EquilibriumSet equilibria(double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
  EquilibriumSet out;
  // x - x^3 + lambda = 0  <=>  t^3 + p t + q = 0 with p = -1, q = -lambda.
  const double disc = 4.0 - 27.0 * lambda * lambda;
  const double kBoundaryTol = 1e-12;

  if (disc > kBoundaryTol) {
    // Three real roots, trigonometric form.
    const double arg = std::clamp(1.5 * std::sqrt(3.0) * lambda, -1.0, 1.0);
    const double theta = std::acos(arg);
    for (int k = 0; k < 3; ++k) {
      out.roots[k] =
          (2.0 / std::sqrt(3.0)) * std::cos((theta - 2.0 * kPi * k) / 3.0);
    }
    std::sort(out.roots.begin(), out.roots.begin() + 3);
    out.count = 3;
  } else if (disc < -kBoundaryTol) {
    // One real root, Cardano.
    const double s = std::sqrt(lambda * lambda / 4.0 - 1.0 / 27.0);
    out.roots[0] = std::cbrt(lambda / 2.0 + s) + std::cbrt(lambda / 2.0 - s);
    out.count = 1;
  } else {
    // Fold point: a double root at -/+ x_c and a simple root at +/- 2 x_c.
    const double dbl = lambda < 0.0 ? kXc : -kXc;
    const double simple = lambda < 0.0 ? -2.0 * kXc : 2.0 * kXc;
    out.roots[0] = std::min(dbl, simple);
    out.roots[1] = std::max(dbl, simple);
    out.count = 2;
    for (int k = 0; k < 2; ++k) {
      out.stability[k] = std::abs(out.roots[k]) == kXc ? Stability::marginal
                         : dforce(out.roots[k]) < 0.0  ? Stability::stable
                                                       : Stability::unstable;
    }
    return out;
  }

  for (int k = 0; k < out.count; ++k) {
    // One Newton step cleans up the trig/cbrt rounding.
    const double fp = dforce(out.roots[k]);
    if (std::abs(fp) > 1e-6) {
      out.roots[k] -= force(out.roots[k], lambda) / fp;
    }
    out.stability[k] =
        dforce(out.roots[k]) < 0.0 ? Stability::stable : Stability::unstable;
  }
  return out;
}

const char* to_string(RegimeCase c) {
  switch (c) {
    case RegimeCase::Ia: return "Ia";
    case RegimeCase::Ib: return "Ib";
    case RegimeCase::IIa: return "IIa";
    case RegimeCase::IIb: return "IIb";
    case RegimeCase::IIIa: return "IIIa";
    case RegimeCase::IIIb: return "IIIb";
  }
  return "?";
}

const char* family_label(RegimeCase c) {
  switch (c) {
    case RegimeCase::Ia:
    case RegimeCase::Ib: return "small amplitude";
    case RegimeCase::IIa:
    case RegimeCase::IIb: return "large amplitude";
    case RegimeCase::IIIa:
    case RegimeCase::IIIb: return "large noise";
  }
  return "?";
}

Regime classify(const ModelParams& p, const Thresholds& th) {
  p.validate();
  const double eps = p.epsilon;
  const double sg = p.sigma;
  const double a0 = p.a0();
  const double abs_a0 = std::abs(a0);
  const double a0_or_eps = std::max(abs_a0, eps);

  // Noise thresholds separating the regimes. Powers of a nonpositive a0 are
  // pinned to 0 so the slack logic resolves them by sign alone.
  const double thr_I = std::pow(a0_or_eps, 0.75);
  const double log_mag = std::max(std::abs(std::log(std::max(abs_a0, 1e-300))), 1e-12);
  const double thr_Ia = std::sqrt(eps) / log_mag;
  const double es = a0 > 0.0 ? eps * std::sqrt(a0) : 0.0;
  const double thr_II = es > 0.0 ? std::sqrt(es) : 0.0;
  const double thr_IIa = es > 0.0 ? std::pow(es, 5.0 / 6.0) : 0.0;
  const double thr_IIIb = a0 > 0.0 ? std::pow(a0, 0.75) : 0.0;

  const double s_amp_small = slack_leq(a0, th.gamma0 * eps);   // a0 <= g0*eps
  const double s_amp_large = slack_leq(th.gamma1 * eps, a0);   // a0 >= g1*eps
  const double s_a0_below_meps = slack_leq(eps, -a0);          // a0 <= -eps
  const double s_a0_below_eps = slack_leq(a0, eps);            // a0 <= eps
  const double s_sg_I = slack_leq(sg, thr_I);
  const double s_sg_Ia = slack_leq(sg, thr_Ia);
  const double s_sg_II = slack_leq(sg, thr_II);
  const double s_sg_IIa = slack_leq(sg, thr_IIa);
  const double s_sg_IIIb = slack_leq(sg, thr_IIIb);

  const double score_I = std::min(s_amp_small, s_sg_I);
  const double score_II = std::min(s_amp_large, s_sg_II);
  const double score_III = std::max(std::min(s_a0_below_eps, -s_sg_I),
                                    std::min(-s_a0_below_eps, -s_sg_II));

  Regime out;
  out.margins = {
      {"a0 <= gamma0*eps", s_amp_small},
      {"a0 >= gamma1*eps", s_amp_large},
      {"a0 <= -eps", s_a0_below_meps},
      {"a0 <= eps", s_a0_below_eps},
      {"sigma <= max(|a0|,eps)^(3/4)", s_sg_I},
      {"sigma <= sqrt(eps)/|log|a0||", s_sg_Ia},
      {"sigma <= (eps*sqrt(a0))^(1/2)", s_sg_II},
      {"sigma <= (eps*sqrt(a0))^(5/6)", s_sg_IIa},
      {"sigma <= a0^(3/4)", s_sg_IIIb},
  };

  double score_case;
  double score_sub;
  if (score_I >= score_II && score_I >= score_III) {
    score_case = score_I;
    const double sub_a = std::max(-s_a0_below_meps, s_sg_Ia);
    const double sub_b = std::min(s_a0_below_meps, -s_sg_Ia);
    out.regime_case = sub_a >= sub_b ? RegimeCase::Ia : RegimeCase::Ib;
    score_sub = std::max(sub_a, sub_b);
  } else if (score_II >= score_III) {
    score_case = score_II;
    const double sub_a = s_sg_IIa;
    const double sub_b = std::min(-s_sg_IIa, s_sg_II);
    out.regime_case = sub_a >= sub_b ? RegimeCase::IIa : RegimeCase::IIb;
    score_sub = std::max(sub_a, sub_b);
  } else {
    score_case = score_III;
    const double sub_a = std::max(s_a0_below_eps, -s_sg_IIIb);
    const double sub_b = std::min(-s_a0_below_eps, s_sg_IIIb);
    out.regime_case = sub_a >= sub_b ? RegimeCase::IIIa : RegimeCase::IIIb;
    score_sub = std::max(sub_a, sub_b);
  }

  out.min_slack = std::min(score_case, score_sub);
  const int positive_cases = (score_I > 0.0 ? 1 : 0) + (score_II > 0.0 ? 1 : 0) +
                             (score_III > 0.0 ? 1 : 0);
  out.borderline = positive_cases != 1 || out.min_slack < th.borderline_slack;
  return out;
}

}  // namespace hyst
