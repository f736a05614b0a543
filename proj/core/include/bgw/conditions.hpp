#pragma once

// Integrability checkers for jump measures: F0, the first-moment condition
// on the combined measure and its two weaker variants, and the small-jump
// condition F6
//
//   liminf_{a -> 0} exp(eps0 * int_(a,1] z lambda(dz)) * int_(0,a] z^2 lambda(dz) = 0.

#include <optional>
#include <string>
#include <vector>

#include "bgw/measure.hpp"

namespace bgw {

enum class Status { kSatisfied, kViolated, kInconclusive };
enum class Method { kExactRule, kSufficientCondition, kNumericScan };

const char* to_string(Status status) noexcept;
const char* to_string(Method method) noexcept;

struct ConditionVerdict {
  Status status = Status::kInconclusive;
  Method method = Method::kNumericScan;
  /// Short name of the rule that decided the verdict, e.g. "R1" or "C1".
  std::string rule;
  std::vector<double> witness;
  std::string detail;

  /// check_first_moment only: int 1 ^ (u1 + u2) dnu < inf.
  std::optional<bool> finite_before_explosion;
  /// check_first_moment only: int (u1^2 + u2^2) ^ (u1 + u2) dnu < inf.
  std::optional<bool> no_explosion;

  bool satisfied() const noexcept { return status == Status::kSatisfied; }
};

ConditionVerdict check_F0(const JumpMeasure& lambda);

ConditionVerdict check_first_moment(const JointJumpMeasure& nu);

/// a_k = 2^-k for k = 1..40.
std::vector<double> default_scan_grid();

struct F6Options {
  double epsilon0 = 1.0;
  std::vector<double> scan_grid = default_scan_grid();
  /// Scan decay floor relative to the estimand at the first grid point.
  double floor = 1e-6;
  /// Trailing grid points inspected by the R2/R3 stability tests and C1.
  int window = 12;
};

/// Rules in order: F0 (violated), R1, R2 (closed form or scan), R3, scan
/// decay, counter-rule C1. Throws kUnsupportedForm when the grid is not a
/// decreasing sequence in (0, 1].
ConditionVerdict check_F6(const JumpMeasure& lambda, const F6Options& options = {});

/// lambda1 with F6 plus lambda2 with int (z ^ 1) lambda2 < inf
/// gives F6 for the sum; otherwise check_F6 on the sum.
ConditionVerdict check_F6_sum(const JumpMeasure& lambda1, const JumpMeasure& lambda2,
                              const F6Options& options = {});

}  // namespace bgw
