#pragma once

#include <cstdint>
#include <vector>

namespace bgw {

struct MeanStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;
  std::size_t n = 0;
};

MeanStats mean_stats(const std::vector<double>& sample);

/// Wasserstein-1 distance between two empirical measures on the line,
/// int |F_a - F_b| dx computed from the merged order statistics.
double wasserstein1(std::vector<double> a, std::vector<double> b);

struct Interval95 {
  double lo = 0.0;
  double hi = 0.0;
};

/// Percentile bootstrap interval for wasserstein1(a, b), resampling each
/// sample with replacement. Deterministic in `seed`.
Interval95 bootstrap_w1_ci(const std::vector<double>& a, const std::vector<double>& b, int reps,
                           std::uint64_t seed, double level = 0.95);

/// 95% quantile of wasserstein1 between resamples of sizes |a| and |b| from
/// the pooled sample: the band an equal-law pair stays below.
double w1_null_band(const std::vector<double>& a, const std::vector<double>& b, int reps,
                    std::uint64_t seed, double level = 0.95);

}  // namespace bgw
