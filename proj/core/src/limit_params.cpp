#include "bgw/limit_params.hpp"

#include <algorithm>
#include <cmath>

#include "bgw/conditions.hpp"
#include "bgw/errors.hpp"

namespace bgw {

void LimitSystemParams::validate() const {
  for (double s : {sigma_f, sigma_m, sigma_f_S, sigma_m_S, sigma_fm_S}) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::kParameter, "diffusion coefficients must be finite and >= 0");
    }
  }
  for (double a : {alpha_f, alpha_m, alpha_f_S, alpha_m_S}) {
    if (!std::isfinite(a)) throw Error(ErrorCode::kParameter, "drift coefficients must be finite");
  }
  double lhs = sigma_f_S * sigma_f_S * sigma_m_S * sigma_m_S;
  double rhs = std::pow(sigma_fm_S, 4);
  if (lhs < rhs * (1.0 - 1e-12)) {
    throw Error(ErrorCode::kConstraint,
                "(sigma_f^S)^2 (sigma_m^S)^2 >= (sigma_fm^S)^4 is violated");
  }
  if (!check_F0(nu_f).satisfied() || !check_F0(nu_m).satisfied()) {
    throw Error(ErrorCode::kParameter, "solo jump measures must integrate 1 ^ u^2");
  }
  try {
    nu_S.integrate([](double a, double b) { return std::min(1.0, a * a + b * b); });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonConvergent) throw;
    throw Error(ErrorCode::kParameter, "nu_S must integrate 1 ^ (u1^2 + u2^2)");
  }
}

LimitSystemParams survival_sexual_limit(double alpha, const JumpMeasure& mu, double q, double p_f,
                                        double p_m, const TruncationFunction& h) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kParameter, "q must lie in [0, 1]");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kParameter, "alpha must be >= 0");
  LimitSystemParams p;
  p.h = h;
  p.alpha_f = -p_f;
  p.alpha_m = -p_m;
  p.alpha_f_S = alpha * q + mu.integrate([&](double u) { return h(q * u); });
  p.alpha_m_S = alpha * (1.0 - q) + mu.integrate([&](double u) { return h((1.0 - q) * u); });
  p.nu_S = JointJumpMeasure::sex_split_image(mu, q);
  p.validate();
  return p;
}

double triplet_alpha(double death_rate, const JumpMeasure& nu, const TruncationFunction& h) {
  return -death_rate + nu.integrate([&](double u) { return h(u); });
}

LimitSystemParams replacement_limit(const Triplet& female, const Triplet& male,
                                    const TruncationFunction& h) {
  LimitSystemParams p;
  p.h = h;
  p.alpha_f_S = female.alpha;
  p.alpha_m_S = male.alpha;
  p.sigma_f_S = female.sigma;
  p.sigma_m_S = male.sigma;
  p.nu_S = JointJumpMeasure::on_axis(Axis::kFirst, female.nu) +
           JointJumpMeasure::on_axis(Axis::kSecond, male.nu);
  p.validate();
  return p;
}

}  // namespace bgw
