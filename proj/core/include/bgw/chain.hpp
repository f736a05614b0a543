#pragma once

// Discrete two-sex Galton-Watson chain
//
//   F_{n+1} = F_n + sum_{p <= F_n} E^f_p + sum_{p <= g_N(F_n, M_n)} L^f_p
//   M_{n+1} = M_n + sum_{p <= M_n} E^m_p + sum_{p <= g_N(F_n, M_n)} L^m_p
//
// and its rescaling Z_[v_N t] / N.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bgw/limit_params.hpp"
#include "bgw/mating.hpp"
#include "bgw/offspring.hpp"
#include "bgw/path.hpp"
#include "bgw/rng.hpp"

namespace bgw {

inline constexpr std::int64_t kCountCeiling = std::int64_t{1} << 62;

struct ChainState {
  std::int64_t F = 0;
  std::int64_t M = 0;
  std::int64_t generation = 0;
};

class ScalingFamily {
 public:
  ScalingFamily(std::int64_t N, double v_N, OffspringLaw female_solo, OffspringLaw male_solo,
                PairLaw pair, MatingFunction mating);

  std::int64_t N() const noexcept { return N_; }
  double v_N() const noexcept { return v_N_; }
  const OffspringLaw& female_solo() const noexcept { return female_; }
  const OffspringLaw& male_solo() const noexcept { return male_; }
  const PairLaw& pair() const noexcept { return pair_; }
  const MatingFunction& mating() const noexcept { return mating_; }

 private:
  std::int64_t N_;
  double v_N_;
  OffspringLaw female_;
  OffspringLaw male_;
  PairLaw pair_;
  MatingFunction mating_;
};

/// One generation with aggregated draws. Counts are floored at 0; throws
/// kOverflow when a count would exceed kCountCeiling.
ChainState step(const ScalingFamily& family, const ChainState& state, Rng& rng);

/// Starts at floor(N z0) and records Z / N at generation floor(v_N t) for each
/// record time. Overflow ends the path and sets exploded_at; reaching (0, 0)
/// sets absorbed_at.
Path simulate_rescaled(const ScalingFamily& family, std::array<double, 2> z0, double horizon,
                       const std::vector<double>& record_times, Rng& rng);

/// Paths 0..num_paths-1, path i driven by stream_for(seed, i).
std::vector<Path> simulate_chain_ensemble(const ScalingFamily& family, std::array<double, 2> z0,
                                          double horizon, const std::vector<double>& record_times,
                                          std::size_t num_paths, std::uint64_t seed,
                                          unsigned threads = 1);

/// Solo laws bernoulli_death(p_•, v_N), pair law sex_split(D^N, q), g = min.
ScalingFamily build_survival_sexual(double alpha, const JumpMeasure& mu, double q, double p_f,
                                    double p_m, std::int64_t N, double v_N);

/// Solo laws constant(0), pair law independent(f, m), g = min.
ScalingFamily build_replacement_couples(const OffspringLaw& f, const OffspringLaw& m,
                                        std::int64_t N, double v_N);

struct TestFunction1 {
  std::string name;
  std::function<double(double)> fn;
};
struct TestFunction2 {
  std::string name;
  std::function<double(double, double)> fn;
};

struct AssumptionARow {
  std::int64_t N = 0;
  std::string moment;
  double estimate = 0.0;  // exact expectation from the law tables
  double mc_estimate = 0.0;
  double standard_error = 0.0;  // of mc_estimate; 0 when no sampling was requested
  double target = 0.0;
};

struct AssumptionAReport {
  std::vector<AssumptionARow> rows;
  /// Per moment: |estimate - target| nonincreasing along the family sequence.
  std::vector<std::pair<std::string, bool>> trend;
  bool all_trending = true;
};

/// Evaluates v_N N E[...] for the A1 moments of each solo law and the A2
/// moments of the pair law, next to their targets from `target`.
AssumptionAReport verify_assumption_A(const std::vector<ScalingFamily>& families,
                                      const LimitSystemParams& target,
                                      const std::vector<TestFunction1>& solo_tests = {},
                                      const std::vector<TestFunction2>& pair_tests = {},
                                      std::int64_t mc_samples = 0, std::uint64_t seed = 0);

}  // namespace bgw
