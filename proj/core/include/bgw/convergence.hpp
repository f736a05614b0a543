#pragma once

// Chain-versus-SDE comparison of one-dimensional marginals at fixed times.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bgw/chain.hpp"
#include "bgw/limit_params.hpp"
#include "bgw/sde.hpp"
#include "bgw/stats.hpp"

namespace bgw {

using FamilyBuilder = std::function<ScalingFamily(std::int64_t N)>;

enum class Statistic { kF, kM, kSum };
const char* to_string(Statistic s) noexcept;

struct StudyOptions {
  std::vector<std::int64_t> ladder{100, 400, 1600};
  std::size_t paths = 1000;
  /// SDE paths; 0 means `paths`.
  std::size_t sde_paths = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  IntegrateOptions sde;
  int bootstrap_reps = 200;
  /// Headline check tolerance floor added for the discretisation error.
  double scheme_tolerance = 0.0;
};

struct MomentRow {
  std::string source;  // "chain" or "sde"
  std::int64_t N = 0;  // 0 for the SDE
  double time = 0.0;
  Statistic statistic = Statistic::kF;
  MeanStats stats;
  std::size_t exploded = 0;
};

struct DistanceRow {
  std::int64_t N = 0;
  double time = 0.0;
  Statistic statistic = Statistic::kF;
  double w1 = 0.0;
  Interval95 ci;
};

struct TrendRow {
  double time = 0.0;
  Statistic statistic = Statistic::kF;
  std::vector<double> w1;  // aligned with the ladder
  /// Nonincreasing except for at most one rise that stays inside the
  /// previous level's bootstrap interval.
  bool decreasing = false;
};

struct HeadlineRow {
  double time = 0.0;
  Statistic statistic = Statistic::kF;
  double chain_mean = 0.0;
  double sde_mean = 0.0;
  double joint_se = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ConvergenceReport {
  std::vector<std::int64_t> ladder;
  std::vector<MomentRow> moments;
  std::vector<DistanceRow> distances;
  std::vector<TrendRow> trends;
  /// Largest N against the SDE: |mean gap| <= max(4 joint SE, scheme tolerance).
  std::vector<HeadlineRow> headline;
  bool headline_pass = false;
};

/// Chain level k uses master seed stream_seed(seed, k); the SDE uses
/// stream_seed(seed, 1 << 20).
ConvergenceReport run_study(const FamilyBuilder& builder, const LimitSystemParams& limit,
                            std::array<double, 2> z0, const std::vector<double>& record_times,
                            const StudyOptions& options);

struct ReplacementSpec {
  double death_f = 0.0;
  double sigma_f = 0.0;
  JumpMeasure nu_f;
  double death_m = 0.0;
  double sigma_m = 0.0;
  JumpMeasure nu_m;
};

/// Replacement-couples families with triplet laws at v_N = N against the
/// limit with mating diffusions sigma_• sqrt(F ^ M) and independent jumps.
ConvergenceReport replacement_study(const ReplacementSpec& spec, std::array<double, 2> z0,
                                    const std::vector<double>& record_times,
                                    const StudyOptions& options);

/// Per-path values of a statistic at record index r, skipping paths that
/// ended before it.
std::vector<double> marginal(const std::vector<Path>& paths, std::size_t r, Statistic s);

}  // namespace bgw
