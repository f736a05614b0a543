#pragma once

// Offspring laws on {-1, 0, 1, 2, ...} and joint pair laws.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "bgw/measure.hpp"
#include "bgw/rng.hpp"
#include "bgw/sampler.hpp"

namespace bgw {

using Pmf = std::vector<std::pair<std::int64_t, double>>;

class OffspringLaw {
 public:
  enum class Kind { kConstant, kBernoulliDeath, kTabulated, kLatticeTail, kBinomialSplit };

  static OffspringLaw constant(std::int64_t k);
  /// P(-1) = p / v_N, P(0) = 1 - p / v_N.
  static OffspringLaw bernoulli_death(double p, double v_N = 1.0);
  static OffspringLaw tabulated(std::vector<std::int64_t> support, std::vector<double> probs);
  /// P(-1) = p_minus, P(1) = p_plus, P(L >= k) = scale * nu[k/N, inf) for
  /// integers k >= 2, remaining mass at 0. A draw from the tail is
  /// floor(N U) with U ~ nu restricted to [2/N, inf), normalised.
  static OffspringLaw lattice_tail(double p_minus, double p_plus, const JumpMeasure& nu,
                                   std::int64_t N, double scale);
  /// D^N: P(D = 1) = alpha / v_N and P(D >= k) = mu[k/N, inf) / (N v_N) for k >= 2.
  static OffspringLaw heavy_tail_DN(double alpha, const JumpMeasure& mu, std::int64_t N, double v_N);
  /// Replacement law with limit triplet (-c + int h dnu, sigma, nu):
  /// P(-1) = sigma^2 N / (2 v_N) + c / v_N, P(1) = sigma^2 N / (2 v_N) and
  /// P(L >= k) = nu[k/N, inf) / (N v_N) for k >= 2.
  static OffspringLaw triplet(double death_rate, double sigma, const JumpMeasure& nu,
                              std::int64_t N, double v_N);
  /// Binomial(C, q) with C drawn from `count` (support must be >= 0).
  static OffspringLaw binomial_split(const OffspringLaw& count, double q);

  Kind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  std::int64_t min_value() const noexcept;

  std::int64_t sample(Rng& rng) const;
  /// Sum of n independent draws, in O(1) expected random numbers for the
  /// built-in kinds (multinomial counts via sequential binomials).
  std::int64_t sample_sum(std::int64_t n, Rng& rng) const;

  /// Exact probability table; lattice tails with density parts are
  /// enumerated up to the point where the remaining tail is below 1e-15.
  const Pmf& pmf() const;
  double mean() const;
  /// E[expm1(t L)], accurate for small |t|.
  double mgf_m1(double t) const;
  double expect(const std::function<double(std::int64_t)>& fn) const;

 private:
  OffspringLaw() = default;
  struct Tail {
    double p_minus = 0.0;
    double p_plus = 0.0;
    double p_tail = 0.0;  // P(L >= 2)
    std::int64_t N = 1;
    double scale = 0.0;
    JumpMeasure nu;
    MeasureSampler sampler;
  };
  std::int64_t sample_tail_value(Rng& rng) const;

  Kind kind_ = Kind::kConstant;
  std::int64_t value_ = 0;
  double p_ = 0.0;
  std::vector<std::int64_t> support_;
  std::vector<double> probs_;
  std::shared_ptr<const Tail> tail_;
  std::shared_ptr<const OffspringLaw> count_;
  std::string label_;

  struct Cache {
    std::once_flag once;
    Pmf pmf;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Joint law of (L^f, L^m) for one mated pair.
class PairLaw {
 public:
  enum class Kind { kIndependent, kSexSplit };

  static PairLaw independent(OffspringLaw f, OffspringLaw m);
  /// D from `d`, L^f ~ Binomial(D, q), L^m = D - L^f.
  static PairLaw sex_split(OffspringLaw d, double q);
  /// Same law shifted by (sf, sm) per pair.
  PairLaw shifted(std::int64_t sf, std::int64_t sm) const;

  struct Draw {
    std::int64_t f;
    std::int64_t m;
    std::int64_t d;  // D for a sex split, f + m otherwise (before the shift)
  };
  Draw sample(Rng& rng) const;
  std::pair<std::int64_t, std::int64_t> sample_sum(std::int64_t n, Rng& rng) const;

  Kind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  const OffspringLaw& first() const noexcept { return a_; }
  const OffspringLaw& second() const noexcept { return b_; }
  std::pair<std::int64_t, std::int64_t> shift() const noexcept { return {sf_, sm_}; }

  double mean_f() const;
  double mean_m() const;
  /// E[expm1(t1 L^f + t2 L^m)].
  double mgf_m1(double t1, double t2) const;
  double expect(const std::function<double(std::int64_t, std::int64_t)>& fn) const;

 private:
  PairLaw(Kind kind, OffspringLaw a, OffspringLaw b, double q)
      : kind_(kind), a_(std::move(a)), b_(std::move(b)), q_(q) {}
  Kind kind_;
  OffspringLaw a_;  // female law, or D for a sex split
  OffspringLaw b_;  // male law (unused for a sex split)
  double q_ = 0.5;
  std::int64_t sf_ = 0;
  std::int64_t sm_ = 0;
};

}  // namespace bgw
