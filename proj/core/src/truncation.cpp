#include "bgw/truncation.hpp"

#include <cmath>
#include <utility>

#include "bgw/errors.hpp"

namespace bgw {

TruncationFunction TruncationFunction::clamp(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kParameter, "truncation radius must be positive and finite");
  }
  TruncationFunction h;
  h.bound_ = radius;
  h.radius_ = radius;
  return h;
}

TruncationFunction TruncationFunction::custom(std::function<double(double)> body, double bound,
                                              double agreement_radius) {
  if (!(bound > 0.0) || !(agreement_radius > 0.0)) {
    throw Error(ErrorCode::kParameter, "truncation bound and agreement radius must be positive");
  }
  TruncationFunction h;
  h.body_ = std::move(body);
  h.bound_ = bound;
  h.radius_ = agreement_radius;
  return h;
}

bool TruncationFunction::verify_on_grid(double lo, double hi, int points) const {
  for (int k = 0; k < points; ++k) {
    double u = lo + (hi - lo) * k / (points - 1);
    double v = (*this)(u);
    if (std::fabs(v) > bound_) return false;
    if (std::fabs(u) <= radius_ && v != u) return false;
  }
  return true;
}

}  // namespace bgw
