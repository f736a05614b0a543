#include "bgw/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "bgw/errors.hpp"

namespace bgw {

const char* to_string(Status status) noexcept {
  switch (status) {
    case Status::kSatisfied: return "SATISFIED";
    case Status::kViolated: return "VIOLATED";
    case Status::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::kExactRule: return "exact-rule";
    case Method::kSufficientCondition: return "sufficient-condition";
    case Method::kNumericScan: return "numeric-scan";
  }
  return "?";
}

namespace {

// Integral or nullopt when the quadrature declares divergence.
template <class F>
std::optional<double> try_integral(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonConvergent) throw;
    return std::nullopt;
  }
}

ConditionVerdict verdict(Status s, Method m, std::string rule, std::vector<double> witness = {},
                         std::string detail = {}) {
  ConditionVerdict v;
  v.status = s;
  v.method = m;
  v.rule = std::move(rule);
  v.witness = std::move(witness);
  v.detail = std::move(detail);
  return v;
}

// True when the trailing values settle: successive differences shrink to a
// small fraction of the magnitude, or the sequence stops increasing.
bool stabilises(const std::vector<double>& seq, int window) {
  int n = static_cast<int>(seq.size());
  if (n < 3) return false;
  int start = std::max(1, n - window);
  bool nonincreasing = true;
  double max_step = 0.0;
  for (int k = start; k < n; ++k) {
    double d = seq[k] - seq[k - 1];
    if (d > 1e-9 * std::max(1.0, std::fabs(seq[k]))) nonincreasing = false;
    max_step = std::max(max_step, std::fabs(d));
  }
  return nonincreasing || max_step <= 1e-3 * std::max(1.0, std::fabs(seq.back()));
}

// Exact R2 for built-in densities touching 0: f(z) = z^2 density(z) has a
// bounded running average iff every power exponent is >= -2 and every
// log-power exponent is > -2. Returns nullopt for custom densities.
std::optional<bool> closed_form_r2(const JumpMeasure& lambda) {
  bool ok = true;
  for (const DensityPart& d : lambda.densities()) {
    if (d.lo() > 0.0) continue;
    if (d.kind() != DensityPart::Kind::kCustom && d.coef() == 0.0) continue;
    switch (d.kind()) {
      case DensityPart::Kind::kPower: ok = ok && d.exponent() >= -2.0; break;
      case DensityPart::Kind::kLogPower: ok = ok && d.exponent() > -2.0; break;
      case DensityPart::Kind::kCustom: return std::nullopt;
    }
  }
  return ok;
}

}  // namespace

ConditionVerdict check_F0(const JumpMeasure& lambda) {
  auto value = try_integral([&] { return lambda.integrate([](double z) { return std::min(z * z, 1.0); }); });
  if (value) return verdict(Status::kSatisfied, Method::kExactRule, "F0", {*value});
  return verdict(Status::kViolated, Method::kExactRule, "F0", {},
                 "int (z^2 ^ 1) dlambda diverges");
}

ConditionVerdict check_first_moment(const JointJumpMeasure& nu) {
  auto full = try_integral([&] { return nu.integrate([](double a, double b) { return a + b; }); });
  auto weak = try_integral(
      [&] { return nu.integrate([](double a, double b) { return std::min(1.0, a + b); }); });
  auto mid = try_integral([&] {
    return nu.integrate([](double a, double b) { return std::min(a * a + b * b, a + b); });
  });
  ConditionVerdict v = full ? verdict(Status::kSatisfied, Method::kExactRule, "C", {*full})
                            : verdict(Status::kViolated, Method::kExactRule, "C", {},
                                      "int (u1 + u2) dnu diverges");
  v.finite_before_explosion = weak.has_value();
  v.no_explosion = mid.has_value();
  return v;
}

std::vector<double> default_scan_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 40; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

ConditionVerdict check_F6(const JumpMeasure& lambda, const F6Options& options) {
  const auto& grid = options.scan_grid;
  if (grid.size() < 3 || !(grid.front() <= 1.0) || !(grid.back() > 0.0) ||
      !std::is_sorted(grid.rbegin(), grid.rend(), std::less_equal<double>{}) ||
      !(options.epsilon0 > 0.0)) {
    throw Error(ErrorCode::kUnsupportedForm,
                "F6 scan needs eps0 > 0 and a strictly decreasing grid in (0, 1]");
  }

  ConditionVerdict f0 = check_F0(lambda);
  if (!f0.satisfied()) {
    f0.rule = "F0";
    f0.detail = "F0 fails, so F6 is not meaningful";
    return f0;
  }

  if (auto r1 = try_integral([&] { return lambda.integrate([](double z) { return std::min(z, 1.0); }); })) {
    return verdict(Status::kSatisfied, Method::kSufficientCondition, "R1", {*r1},
                   "int (z ^ 1) dlambda < inf");
  }

  // Scan quantities: I(a) = int_(a,1] z dlambda, J(a) = int_(0,a] z^2 dlambda,
  // accumulated piecewise along the grid.
  const std::size_t n = grid.size();
  std::vector<double> I(n), J(n);
  auto zf = [](double z) { return z; };
  auto z2f = [](double z) { return z * z; };
  try {
    I[0] = lambda.integrate(zf, Interval{grid[0], 1.0, false});
    for (std::size_t k = 1; k < n; ++k) {
      I[k] = I[k - 1] + lambda.integrate(zf, Interval{grid[k], grid[k - 1], false});
    }
    J[n - 1] = lambda.integrate(z2f, Interval{0.0, grid[n - 1], false});
    for (std::size_t k = n - 1; k-- > 0;) {
      J[k] = J[k + 1] + lambda.integrate(z2f, Interval{grid[k + 1], grid[k], false});
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonConvergent) throw;
    throw Error(ErrorCode::kUnsupportedForm, std::string("F6 scan integrals failed: ") + e.what());
  }

  std::vector<double> log_est(n), estimand(n);
  for (std::size_t k = 0; k < n; ++k) {
    log_est[k] = J[k] > 0.0 ? options.epsilon0 * I[k] + std::log(J[k]) : -kInf;
    estimand[k] = std::exp(log_est[k]);
  }

  // R2: sup_a J(a)/a < inf.
  std::optional<bool> r2 = closed_form_r2(lambda);
  if (r2.value_or(false)) {
    return verdict(Status::kSatisfied, Method::kSufficientCondition, "R2", estimand,
                   "f = z^2 density is bounded near 0 on average");
  }
  if (!r2) {
    std::vector<double> avg(n);
    for (std::size_t k = 0; k < n; ++k) avg[k] = J[k] / grid[k];
    if (stabilises(avg, options.window)) {
      return verdict(Status::kSatisfied, Method::kSufficientCondition, "R2", avg,
                     "running average of f settles on the grid");
    }
  }

  // R3: int_(a,a0] z dlambda / (-log J(a)) bounded, with a0 the first grid
  // point where J < 1.
  {
    std::size_t k0 = 0;
    while (k0 < n && !(J[k0] < 1.0)) ++k0;
    if (k0 + 3 < n) {
      std::vector<double> ratio;
      for (std::size_t k = k0 + 1; k < n; ++k) {
        if (!(J[k] > 0.0)) break;
        ratio.push_back((I[k] - I[k0]) / -std::log(J[k]));
      }
      if (ratio.size() >= 3 && stabilises(ratio, options.window)) {
        return verdict(Status::kSatisfied, Method::kSufficientCondition, "R3", ratio,
                       "logarithmic ratio stays bounded on the grid");
      }
    }
  }

  double base = log_est[0];
  for (std::size_t k = n / 2; k < n; ++k) {
    if (log_est[k] - base < std::log(options.floor)) {
      return verdict(Status::kSatisfied, Method::kNumericScan, "scan", estimand,
                     "estimand decays below the floor");
    }
  }

  // C1: increments of I strictly increasing over the window (superlinear
  // growth in the dyadic index) while log J falls no faster than linearly.
  // Then eps0 * I dominates log J for every eps0 > 0.
  {
    int w = std::min<int>(options.window, static_cast<int>(n) - 2);
    bool superlinear = true;
    bool linear_fall = true;
    double first_drop = -1.0;
    for (std::size_t k = n - w; k < n; ++k) {
      double inc_prev = I[k - 1] - I[k - 2];
      double inc = I[k] - I[k - 1];
      if (!(inc > inc_prev * (1.0 + 1e-6) + 1e-12)) superlinear = false;
      double drop = std::log(J[k - 1]) - std::log(J[k]);
      if (first_drop < 0.0) first_drop = drop;
      if (!std::isfinite(drop) || drop > first_drop * 1.05 + 1e-9) linear_fall = false;
    }
    if (superlinear && linear_fall) {
      return verdict(Status::kViolated, Method::kSufficientCondition, "C1", estimand,
                     "int_(a,1] z dlambda grows superlinearly in log(1/a) while log J is linear");
    }
  }

  return verdict(Status::kInconclusive, Method::kNumericScan, "scan", estimand,
                 "no rule fired and the scan shows no decay");
}

ConditionVerdict check_F6_sum(const JumpMeasure& lambda1, const JumpMeasure& lambda2,
                              const F6Options& options) {
  auto r1_of = [](const JumpMeasure& m) {
    return try_integral([&] { return m.integrate([](double z) { return std::min(z, 1.0); }); });
  };
  if (r1_of(lambda2)) {
    ConditionVerdict first = check_F6(lambda1, options);
    if (first.satisfied()) {
      first.rule = "sum+" + first.rule;
      first.method = Method::kSufficientCondition;
      first.detail = "F6 for lambda1 and int (z ^ 1) dlambda2 < inf";
      return first;
    }
  } else if (r1_of(lambda1)) {
    ConditionVerdict second = check_F6(lambda2, options);
    if (second.satisfied()) {
      second.rule = "sum+" + second.rule;
      second.method = Method::kSufficientCondition;
      second.detail = "F6 for lambda2 and int (z ^ 1) dlambda1 < inf";
      return second;
    }
  }
  return check_F6(lambda1 + lambda2, options);
}

}  // namespace bgw
