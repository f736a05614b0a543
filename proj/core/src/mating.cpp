#include "bgw/mating.hpp"

#include <algorithm>
#include <cmath>

#include "bgw/errors.hpp"

namespace bgw {

MatingFunction MatingFunction::min() {
  MatingFunction g;
  g.is_min_ = true;
  g.a_dom_ = 1.0;
  g.b_dom_ = 0.0;
  g.name_ = "min";
  return g;
}

MatingFunction MatingFunction::expression(const std::string& limit, double a_dom, double b_dom,
                                          const std::optional<std::string>& prelimit) {
  auto lim = std::make_shared<const Expr>(Expr::parse(limit, {"y", "z"}));
  std::function<std::int64_t(std::int64_t, std::int64_t, std::int64_t)> pre;
  if (prelimit) {
    auto p = std::make_shared<const Expr>(Expr::parse(*prelimit, {"y", "z", "N"}));
    pre = [p](std::int64_t N, std::int64_t j, std::int64_t k) {
      double v[3] = {static_cast<double>(j), static_cast<double>(k), static_cast<double>(N)};
      return static_cast<std::int64_t>(std::floor(p->eval(v)));
    };
  } else {
    pre = [lim](std::int64_t N, std::int64_t j, std::int64_t k) {
      double n = static_cast<double>(N);
      return static_cast<std::int64_t>(std::floor(n * lim->eval(j / n, k / n)));
    };
  }
  return custom([lim](double y, double z) { return lim->eval(y, z); }, std::move(pre), a_dom,
                b_dom, limit);
}

MatingFunction MatingFunction::custom(
    std::function<double(double, double)> limit,
    std::function<std::int64_t(std::int64_t, std::int64_t, std::int64_t)> prelimit, double a_dom,
    double b_dom, std::string name) {
  if (!(a_dom >= 0.0) || !(b_dom >= 0.0)) {
    throw Error(ErrorCode::kParameter, "domination constants must be nonnegative");
  }
  MatingFunction g;
  g.limit_ = std::move(limit);
  g.prelimit_ = std::move(prelimit);
  g.a_dom_ = a_dom;
  g.b_dom_ = b_dom;
  g.name_ = std::move(name);
  return g;
}

double MatingFunction::limit(double y, double z) const {
  if (!(y >= 0.0) || !(z >= 0.0)) {
    throw Error(ErrorCode::kDomain, "mating function needs nonnegative arguments");
  }
  return limit_unchecked(y, z);
}

double eval_limit(const MatingFunction& g, double y, double z) { return g.limit(y, z); }

ConditionVerdict check_B1(const MatingFunction& g, const std::vector<std::int64_t>& N_list,
                          double grid_bound, const B1Options& options) {
  ConditionVerdict v;
  v.method = Method::kNumericScan;
  v.rule = "B1";
  for (std::int64_t N : N_list) {
    std::int64_t top = static_cast<std::int64_t>(std::floor(grid_bound * static_cast<double>(N)));
    std::int64_t stride = std::max<std::int64_t>(1, top / (options.max_points_per_axis - 1));
    std::vector<std::int64_t> pts;
    for (std::int64_t j = 0; j <= top; j += stride) pts.push_back(j);
    if (pts.back() != top) pts.push_back(top);
    double n = static_cast<double>(N);
    double sup = 0.0;
    for (std::int64_t j : pts) {
      for (std::int64_t k : pts) {
        double gap = std::fabs(static_cast<double>(g.prelimit(N, j, k)) / n - g.limit(j / n, k / n));
        sup = std::max(sup, gap);
      }
    }
    v.witness.push_back(sup);
  }
  const auto& s = v.witness;
  bool nonincreasing = true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] > s[i - 1] * (1.0 + 1e-12) + 1e-15) nonincreasing = false;
  }
  if (s.empty()) {
    v.status = Status::kInconclusive;
  } else if (nonincreasing && (s.back() <= options.tolerance || (s.size() > 1 && s.back() <= 0.5 * s.front()))) {
    v.status = Status::kSatisfied;
    v.detail = "lattice sups decrease towards 0";
  } else if (s.size() > 1 && s.back() >= s.front() * (1.0 - 1e-12) && s.back() > options.tolerance) {
    v.status = Status::kViolated;
    v.detail = "lattice sups do not decrease";
  } else {
    v.status = Status::kInconclusive;
    v.detail = "lattice sups decrease but stay above the tolerance";
  }
  return v;
}

MatingReport check_B2_B3_B4(const MatingFunction& g, double delta, double n, double grid_step,
                            double grid_bound) {
  if (!(delta > 0.0) || !(n > delta) || !(grid_step > 0.0)) {
    throw Error(ErrorCode::kParameter, "check_B2_B3_B4 needs 0 < delta < n and a positive step");
  }
  MatingReport r;
  const int m = static_cast<int>(std::floor(grid_bound / grid_step + 1e-9));
  std::vector<double> axis(m + 1);
  for (int i = 0; i <= m; ++i) axis[i] = i * grid_step;

  // B2 and the Lipschitz estimate on the full grid.
  double worst_excess = -kInf;
  double lip = 0.0;
  std::vector<double> prev_row(m + 1), row(m + 1);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      double val = g.limit(axis[i], axis[j]);
      row[j] = val;
      double bound = g.a_dom() * std::min(axis[i], axis[j]) + g.b_dom();
      worst_excess = std::max(worst_excess, val - bound);
      if (j > 0) lip = std::max(lip, std::fabs(val - row[j - 1]) / grid_step);
      if (i > 0) lip = std::max(lip, std::fabs(val - prev_row[j]) / grid_step);
    }
    std::swap(row, prev_row);
  }
  r.lipschitz_estimate = lip;
  r.B2.rule = "B2";
  r.B2.method = Method::kNumericScan;
  r.B2.witness = {worst_excess};
  r.B2.status = worst_excess <= 1e-12 ? Status::kSatisfied : Status::kViolated;

  // B3: exact zeros on both axes, finite slope estimate.
  double axis_max = 0.0;
  for (double t : axis) {
    axis_max = std::max({axis_max, std::fabs(g.limit(t, 0.0)), std::fabs(g.limit(0.0, t))});
  }
  r.B3.rule = "B3";
  r.B3.method = Method::kNumericScan;
  r.B3.witness = {axis_max, lip};
  r.B3.status = (axis_max == 0.0 && std::isfinite(lip)) ? Status::kSatisfied : Status::kViolated;
  r.B3.detail = "Lipschitz constant is a finite-difference estimate";

  // B4: grid infimum over [delta, n]^2.
  std::vector<double> sq;
  for (double t = delta; t < n; t += grid_step) sq.push_back(t);
  sq.push_back(n);
  double inf = kInf;
  for (double y : sq) {
    for (double z : sq) inf = std::min(inf, g.limit(y, z));
  }
  r.b4_inf = inf;
  r.B4.rule = "B4";
  r.B4.method = Method::kNumericScan;
  r.B4.witness = {inf};
  r.B4.status = inf > 1e-12 ? Status::kSatisfied : Status::kViolated;
  return r;
}

}  // namespace bgw
