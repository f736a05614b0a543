#pragma once

#include <array>
#include <vector>

#include "bgw/measure.hpp"
#include "bgw/rng.hpp"

namespace bgw {

/// Draws from a finite restriction of a JumpMeasure, normalised.
///
/// Atoms are exact. Each density part is cut into bins (geometric when the
/// support spans more than a factor 8, uniform otherwise) whose masses come
/// from the adaptive quadrature; inside a bin the cumulative integral is
/// inverted by safeguarded Newton steps on a 15-point Gauss-Kronrod rule.
/// An unbounded part is truncated where its remaining mass falls below
/// 1e-14 of the part mass.
class MeasureSampler {
 public:
  MeasureSampler() = default;
  /// Throws kParameter when the restriction has infinite mass.
  MeasureSampler(const JumpMeasure& measure, const Interval& region, int bins = 256);

  double mass() const noexcept { return total_; }
  bool empty() const noexcept { return total_ <= 0.0; }
  double draw(Rng& rng) const;

 private:
  struct Bin {
    double lo;
    double hi;
    double cum;   // mass up to and including this bin
    int part;     // index into parts_, or -1 for an atom located at lo
  };
  double invert(const Bin& bin, double target) const;

  std::vector<DensityPart> parts_;
  std::vector<Bin> bins_;
  double total_ = 0.0;
};

/// Draws from the part of a JointJumpMeasure with max(u1, u2) > eps.
class JointSampler {
 public:
  JointSampler() = default;
  JointSampler(const JointJumpMeasure& measure, double eps, int bins = 256);

  double mass() const noexcept { return total_; }
  bool empty() const noexcept { return total_ <= 0.0; }
  std::array<double, 2> draw(Rng& rng) const;

 private:
  struct Component {
    double cum;
    double c1;
    double c2;
    MeasureSampler base;  // empty for an atom
    double u1;
    double u2;
  };
  std::vector<Component> components_;
  double total_ = 0.0;
};

}  // namespace bgw
