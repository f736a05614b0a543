#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bgw/conditions.hpp"
#include "bgw/sde.hpp"

namespace bgw {

struct RegimeOptions {
  /// Grid [0, grid_bound]^2 with this many points per axis for F1-F3.
  double grid_bound = 20.0;
  int grid_points = 81;
  /// Ellipticity squares [delta, n]^2.
  std::vector<std::pair<double, double>> ellipticity_boxes{{0.05, 10.0}, {0.01, 20.0}};
  F6Options f6;
};

struct RegimeReport {
  /// Hypothesis name and verdict, in evaluation order.
  std::vector<std::pair<std::string, ConditionVerdict>> items;
  /// kSatisfied only if every item is.
  Status overall = Status::kInconclusive;
};

/// General systems: F1 (vanishing on both axes), F2, F3 growth with the
/// declared constants, F4, F5 ellipticity, then F0 and F6 on lambda_1 +
/// lambda_2. Limit systems: each coefficient of a coordinate vanishes on its
/// own axis, F3 growth, F4, the mating conditions B2-B4 in place of F5, then
/// F0 and F6 on the two coordinate projections of the jump measure.
RegimeReport detect_uniqueness_regime(const JumpSdeSystem& system, const RegimeOptions& options = {});

}  // namespace bgw
