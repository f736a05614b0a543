#pragma once

#include "bgw/mating.hpp"
#include "bgw/measure.hpp"
#include "bgw/truncation.hpp"

namespace bgw {

/// Coefficients of the two-sex limit system: solo triplets (alpha, sigma, nu)
/// per sex, mating drifts and covariances, the mating jump measure nu_S, the
/// truncation h and the mating function g.
struct LimitSystemParams {
  double alpha_f = 0.0;
  double alpha_m = 0.0;
  double sigma_f = 0.0;
  double sigma_m = 0.0;
  JumpMeasure nu_f;
  JumpMeasure nu_m;
  double alpha_f_S = 0.0;
  double alpha_m_S = 0.0;
  double sigma_f_S = 0.0;
  double sigma_m_S = 0.0;
  double sigma_fm_S = 0.0;
  JointJumpMeasure nu_S;
  TruncationFunction h = TruncationFunction::clamp();
  MatingFunction g = MatingFunction::min();

  /// kParameter for negative sigmas or non-integrable measures; kConstraint
  /// when (sigma_f^S)^2 (sigma_m^S)^2 < (sigma_fm^S)^4.
  void validate() const;
  /// nu_f x delta_0 + delta_0 x nu_m + nu_S.
  JointJumpMeasure nu() const { return combine_nu(nu_f, nu_m, nu_S); }
};

/// Limit of the survival-sexual family: alpha_f = -p_f, alpha_m = -p_m,
/// alpha_f^S = alpha q + int h(q u) mu(du), alpha_m^S = alpha (1-q) +
/// int h((1-q) u) mu(du), nu_S the image of mu under u -> (q u, (1-q) u).
LimitSystemParams survival_sexual_limit(double alpha, const JumpMeasure& mu, double q, double p_f,
                                        double p_m,
                                        const TruncationFunction& h = TruncationFunction::clamp());

struct Triplet {
  double alpha = 0.0;
  double sigma = 0.0;
  JumpMeasure nu;
};

/// Limit of the replacement-couples family: no solo terms, alpha_•^S =
/// alpha_•, sigma_•^S = sigma_•, sigma_fm^S = 0 and nu_S = nu_f on the first
/// axis plus nu_m on the second.
LimitSystemParams replacement_limit(const Triplet& female, const Triplet& male,
                                    const TruncationFunction& h = TruncationFunction::clamp());

/// alpha of the triplet law with death rate c: -c + int h dnu.
double triplet_alpha(double death_rate, const JumpMeasure& nu,
                     const TruncationFunction& h = TruncationFunction::clamp());

}  // namespace bgw
