#pragma once

#include <functional>
#include <span>

namespace bgw {

struct QuadOptions {
  double rel_tol = 1e-8;
  /// Partial sums beyond this magnitude are treated as a divergent integral.
  double ceiling = 1e12;
  /// Dyadic pieces with non-decaying contributions before divergence is declared.
  int stall_window = 24;
  int max_pieces = 1060;
};

/// Integral of f over the half-open interval (lo, hi]; hi may be +infinity.
///
/// Finite pieces away from 0 use adaptive Gauss-Kronrod. A piece touching 0
/// is refined geometrically, (hi/2^(k+1), hi/2^k], and an infinite upper end
/// is covered by [a 2^k, a 2^(k+1)]. Refinement stops once the geometric tail
/// estimate of the remaining pieces drops below rel_tol of the sum. Throws
/// ErrorCode::kNonConvergent when partial sums exceed the ceiling or piece
/// contributions stop decaying for stall_window consecutive pieces.
double integrate_interval(const std::function<double(double)>& f, double lo, double hi,
                          std::span<const double> breakpoints = {},
                          const QuadOptions& options = {});

}  // namespace bgw
