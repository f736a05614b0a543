#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bgw/conditions.hpp"
#include "bgw/expr.hpp"

namespace bgw {

/// Mating function pair: the limit g on [0, inf)^2 and the prelimit g_N on
/// integer counts, with the domination constants g <= a (y ^ z) + b.
class MatingFunction {
 public:
  /// g_N(j, k) = j ^ k and g(y, z) = y ^ z.
  static MatingFunction min();

  /// Limit given by an expression in (y, z). Without `prelimit`, g_N(j, k) =
  /// floor(N g(j/N, k/N)); otherwise floor of the prelimit expression in
  /// (y, z, N) evaluated on the integer counts y = j, z = k.
  static MatingFunction expression(const std::string& limit, double a_dom, double b_dom,
                                   const std::optional<std::string>& prelimit = std::nullopt);

  static MatingFunction custom(std::function<double(double, double)> limit,
                               std::function<std::int64_t(std::int64_t, std::int64_t, std::int64_t)> prelimit,
                               double a_dom, double b_dom, std::string name);

  /// g(y, z); kDomain on negative inputs.
  double limit(double y, double z) const;
  /// g(y, z) without the domain check, for hot loops on valid states.
  double limit_unchecked(double y, double z) const {
    return is_min_ ? (y < z ? y : z) : limit_(y, z);
  }
  /// g_N(j, k) as a count for scaling parameter N.
  std::int64_t prelimit(std::int64_t N, std::int64_t j, std::int64_t k) const {
    return is_min_ ? (j < k ? j : k) : prelimit_(N, j, k);
  }

  bool is_min() const noexcept { return is_min_; }
  double a_dom() const noexcept { return a_dom_; }
  double b_dom() const noexcept { return b_dom_; }
  const std::string& name() const noexcept { return name_; }

 private:
  MatingFunction() = default;
  bool is_min_ = false;
  std::function<double(double, double)> limit_;
  std::function<std::int64_t(std::int64_t, std::int64_t, std::int64_t)> prelimit_;
  double a_dom_ = 1.0;
  double b_dom_ = 0.0;
  std::string name_;
};

double eval_limit(const MatingFunction& g, double y, double z);

struct B1Options {
  double tolerance = 1e-2;
  /// Lattice points per axis are capped by striding; the corners are always kept.
  int max_points_per_axis = 513;
};

/// sup over [0, grid_bound]^2 of |g_N(Ny, Nz)/N - g(y, z)| on (N/N)^2 for each
/// N. SATISFIED when the sups are nonincreasing and end below the tolerance
/// or at most half the first value; VIOLATED when they do not decrease and
/// stay above it.
ConditionVerdict check_B1(const MatingFunction& g, const std::vector<std::int64_t>& N_list,
                          double grid_bound, const B1Options& options = {});

struct MatingReport {
  ConditionVerdict B2;
  ConditionVerdict B3;
  ConditionVerdict B4;
  double b4_inf = 0.0;
  double lipschitz_estimate = 0.0;
};

/// Grid checks over [0, grid_bound]^2 with spacing grid_step. B4 uses the
/// square [delta, n]^2 on the same spacing plus its edges.
MatingReport check_B2_B3_B4(const MatingFunction& g, double delta, double n,
                            double grid_step = 1.0 / 64.0, double grid_bound = 20.0);

}  // namespace bgw
