#pragma once

#include <functional>

namespace bgw {

/// Bounded continuous h with h(u) = u on [-agreement_radius, agreement_radius].
/// Splits jumps into a compensated small part h(u) and a large part u - h(u).
class TruncationFunction {
 public:
  /// h(u) = (-r) v (u ^ r); the default r = 1 gives (-1) v (u ^ 1).
  static TruncationFunction clamp(double radius = 1.0);

  /// User-supplied body. `bound` must dominate |h| and h must be the identity
  /// on [-agreement_radius, agreement_radius]; verify_on_grid() checks both.
  static TruncationFunction custom(std::function<double(double)> body, double bound,
                                   double agreement_radius);

  double operator()(double u) const { return body_ ? body_(u) : clamp_value(u); }
  double bound() const noexcept { return bound_; }
  double agreement_radius() const noexcept { return radius_; }

  /// Checks the identity and boundedness invariants on a uniform grid over [lo, hi].
  bool verify_on_grid(double lo, double hi, int points) const;

 private:
  TruncationFunction() = default;
  double clamp_value(double u) const { return u < -radius_ ? -radius_ : (u > radius_ ? radius_ : u); }

  std::function<double(double)> body_;
  double bound_ = 1.0;
  double radius_ = 1.0;
};

}  // namespace bgw
