#include "bgw/regime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bgw/errors.hpp"
#include "bgw/mating.hpp"

namespace bgw {
namespace {

constexpr double kZeroTol = 1e-12;

std::vector<double> grid(double bound, int points) {
  std::vector<double> g;
  for (int k = 0; k < points; ++k) g.push_back(bound * k / (points - 1));
  return g;
}

ConditionVerdict verdict(bool ok, const std::string& rule, std::vector<double> witness,
                         const std::string& detail) {
  ConditionVerdict v;
  v.status = ok ? Status::kSatisfied : Status::kViolated;
  v.method = Method::kNumericScan;
  v.rule = rule;
  v.witness = std::move(witness);
  v.detail = detail;
  return v;
}

ConditionVerdict check_h(const TruncationFunction& h) {
  bool ok = h.verify_on_grid(0.0, 4.0 * std::max(1.0, h.agreement_radius()), 401);
  return verdict(ok, "F4", {}, ok ? "h is the identity near 0 and bounded" : "h fails identity/bound on grid");
}

ConditionVerdict check_growth(const JumpSdeSystem& s, const std::vector<double>& g,
                              const std::function<double(double, double)>& lhs) {
  for (double x : g) {
    for (double y : g) {
      double v = lhs(x, y);
      double rhs = s.L_growth * (x + y) + s.A_growth;
      if (!(v <= rhs * (1.0 + 1e-9) + 1e-12)) {
        std::ostringstream os;
        os << "growth sum " << v << " exceeds L(x+y)+A = " << rhs;
        return verdict(false, "F3", {x, y}, os.str());
      }
    }
  }
  return verdict(true, "F3", {s.L_growth, s.A_growth}, "linear growth bound holds on grid");
}

ConditionVerdict check_measures(const JumpMeasure& l1, const JumpMeasure& l2, bool f0,
                                const F6Options& opt) {
  if (f0) return check_F0(l1 + l2);
  return check_F6_sum(l1, l2, opt);
}

RegimeReport finish(RegimeReport r) {
  bool all = true, violated = false;
  for (const auto& [name, v] : r.items) {
    all = all && v.status == Status::kSatisfied;
    violated = violated || v.status == Status::kViolated;
  }
  r.overall = all ? Status::kSatisfied : (violated ? Status::kViolated : Status::kInconclusive);
  return r;
}

RegimeReport general_regime(const JumpSdeSystem& s, const RegimeOptions& o) {
  const auto& c = *s.general;
  RegimeReport r;
  auto g = grid(o.grid_bound, o.grid_points);

  ConditionVerdict f1 = verdict(true, "F1", {}, "b, l, kappa vanish on both axes");
  for (double w : g) {
    for (std::size_t i = 0; i < 2 && f1.satisfied(); ++i) {
      for (auto [x, y] : {std::pair{0.0, w}, std::pair{w, 0.0}}) {
        double m = std::max({std::fabs(c.b[i](x, y)), std::fabs(c.ell[i](x, y)), std::fabs(c.kappa[i](x, y))});
        if (m > kZeroTol) {
          f1 = verdict(false, "F1", {x, y}, "coefficient " + std::to_string(i + 1) + " nonzero on an axis");
          break;
        }
      }
    }
  }
  r.items.emplace_back("F1", f1);

  ConditionVerdict f2 = verdict(true, "F2", {}, "l, kappa >= 0 and p > 0 on grid");
  for (double x : g) {
    for (double y : g) {
      for (std::size_t i = 0; i < 2; ++i) {
        if (c.ell[i](x, y) < -kZeroTol || c.kappa[i](x, y) < -kZeroTol || !(c.p[i](x, y) > 0.0)) {
          if (f2.satisfied()) f2 = verdict(false, "F2", {x, y}, "sign condition fails");
        }
      }
    }
  }
  r.items.emplace_back("F2", f2);

  ConditionVerdict f3 = check_growth(s, g, [&](double x, double y) {
    return std::fabs(c.b[0](x, y)) + std::fabs(c.b[1](x, y)) + c.ell[0](x, y) + c.ell[1](x, y) +
           c.kappa[0](x, y) + c.kappa[1](x, y);
  });
  if (f3.satisfied()) {
    for (double x : g) {
      for (double y : g) {
        if (c.p[0](x, y) > 1.0 + kZeroTol || c.p[1](x, y) > 1.0 + kZeroTol) {
          if (f3.satisfied()) f3 = verdict(false, "F3", {x, y}, "p exceeds 1");
        }
      }
    }
  }
  r.items.emplace_back("F3", f3);
  r.items.emplace_back("F4", check_h(s.h));

  ConditionVerdict f5 = verdict(true, "F5", {}, "l_i bounded below on every box");
  for (auto [delta, n] : o.ellipticity_boxes) {
    auto box = grid(n - delta, o.grid_points);
    double inf = std::numeric_limits<double>::infinity();
    for (double a : box) {
      for (double b : box) {
        inf = std::min({inf, c.ell[0](a + delta, b + delta), c.ell[1](a + delta, b + delta)});
      }
    }
    f5.witness.push_back(inf);
    if (!(inf > 0.0)) {
      f5 = verdict(false, "F5", {delta, n, inf}, "l_i vanishes somewhere on [delta, n]^2");
      break;
    }
  }
  r.items.emplace_back("F5", f5);
  r.items.emplace_back("F0", check_measures(c.lambda[0], c.lambda[1], true, o.f6));
  r.items.emplace_back("F6", check_measures(c.lambda[0], c.lambda[1], false, o.f6));
  return finish(r);
}

RegimeReport limit_regime(const JumpSdeSystem& s, const RegimeOptions& o) {
  const auto& p = *s.limit;
  RegimeReport r;
  auto g = grid(o.grid_bound, o.grid_points);

  // Coefficients of coordinate i: drift, diffusion square and jump rates
  // that move it.
  auto own = [&](int i, double x, double y) {
    double m = std::fabs(s.drift[static_cast<std::size_t>(i)](x, y)) + s.ell(i, x, y);
    for (const auto& d : s.jumps) {
      bool moves = false;
      for (const auto& a : d.measure.atoms()) moves = moves || (i == 0 ? a.u1 : a.u2) > 0.0;
      for (const auto& cv : d.measure.curves()) moves = moves || (i == 0 ? cv.c1 : cv.c2) > 0.0;
      for (const auto& ax : d.measure.axis_parts()) moves = moves || (ax.axis == (i == 0 ? Axis::kFirst : Axis::kSecond));
      if (moves) m += std::fabs(d.rate(x, y));
    }
    return m;
  };
  ConditionVerdict f1 = verdict(true, "F1-own-axis", {}, "coefficients of each coordinate vanish on its own axis");
  for (double w : g) {
    if (own(0, 0.0, w) > kZeroTol) {
      f1 = verdict(false, "F1-own-axis", {0.0, w}, "female coefficients nonzero at F = 0");
      break;
    }
    if (own(1, w, 0.0) > kZeroTol) {
      f1 = verdict(false, "F1-own-axis", {w, 0.0}, "male coefficients nonzero at M = 0");
      break;
    }
  }
  r.items.emplace_back("F1", f1);

  r.items.emplace_back("F3", check_growth(s, g, [&](double x, double y) {
    double v = std::fabs(s.drift[0](x, y)) + std::fabs(s.drift[1](x, y)) + s.ell(0, x, y) + s.ell(1, x, y);
    for (const auto& d : s.jumps) v += d.rate(x, y);
    return v;
  }));
  r.items.emplace_back("F4", check_h(s.h));

  auto [delta, n] = o.ellipticity_boxes.front();
  MatingReport m = check_B2_B3_B4(p.g, delta, n, o.grid_bound / (o.grid_points - 1), o.grid_bound);
  r.items.emplace_back("B2", m.B2);
  r.items.emplace_back("B3", m.B3);
  r.items.emplace_back("B4", m.B4);

  JointJumpMeasure nu = p.nu();
  JumpMeasure l1 = nu.projection(Axis::kFirst);
  JumpMeasure l2 = nu.projection(Axis::kSecond);
  r.items.emplace_back("F0", check_measures(l1, l2, true, o.f6));
  r.items.emplace_back("F6", check_measures(l1, l2, false, o.f6));
  return finish(r);
}

}  // namespace

RegimeReport detect_uniqueness_regime(const JumpSdeSystem& system, const RegimeOptions& options) {
  if (system.general) return general_regime(system, options);
  if (system.limit) return limit_regime(system, options);
  throw Error(ErrorCode::kParameter, "system carries neither general nor limit coefficients");
}

}  // namespace bgw
