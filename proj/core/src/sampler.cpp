#include "bgw/sampler.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bgw/errors.hpp"

namespace bgw {
namespace {

std::vector<double> bin_nodes(double lo, double hi, int bins) {
  std::vector<double> nodes;
  if (lo > 0.0 && hi / lo > 8.0) {
    double ratio = std::log(hi / lo);
    for (int k = 0; k <= bins; ++k) nodes.push_back(lo * std::exp(ratio * k / bins));
  } else if (lo == 0.0) {
    // Geometric toward 0 with a first bin (0, hi 2^-40].
    nodes.push_back(0.0);
    for (int k = 0; k <= bins; ++k) nodes.push_back(hi * std::exp2(-40.0 * (bins - k) / bins));
  } else {
    for (int k = 0; k <= bins; ++k) nodes.push_back(lo + (hi - lo) * k / bins);
  }
  nodes.back() = hi;
  return nodes;
}

}  // namespace

MeasureSampler::MeasureSampler(const JumpMeasure& measure, const Interval& region, int bins) {
  try {
    for (const Atom& a : measure.atoms()) {
      if (!region.contains(a.location)) continue;
      total_ += a.mass;
      bins_.push_back({a.location, a.location, total_, -1});
    }
    for (const DensityPart& d : measure.densities()) {
      double lo = std::max(d.lo(), region.lo);
      double hi = std::min(d.hi(), region.hi);
      if (!(hi > lo)) continue;
      int part = static_cast<int>(parts_.size());
      parts_.push_back(d);
      auto f = [&d](double u) { return d(u); };
      if (std::isinf(hi)) {
        // Finite section up to the point where the remaining tail is negligible.
        double whole = integrate_interval(f, lo, hi, d.breakpoints());
        double cut = std::max(lo * 2.0, 1.0);
        while (integrate_interval(f, cut, kInf) > 1e-14 * whole && cut < 1e300) cut *= 2.0;
        hi = cut;
      }
      std::vector<double> nodes = bin_nodes(lo, hi, bins);
      for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        double m = integrate_interval(f, nodes[k], nodes[k + 1], d.breakpoints());
        if (m <= 0.0) continue;
        total_ += m;
        bins_.push_back({nodes[k], nodes[k + 1], total_, part});
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonConvergent) throw;
    throw Error(ErrorCode::kParameter, "cannot sample from a restriction with infinite mass");
  }
  if (!std::isfinite(total_)) {
    throw Error(ErrorCode::kParameter, "cannot sample from a restriction with infinite mass");
  }
}

double MeasureSampler::invert(const Bin& bin, double target) const {
  const DensityPart& d = parts_[static_cast<std::size_t>(bin.part)];
  auto f = [&d](double u) { return d(u); };
  auto cdf = [&](double x) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, bin.lo, x, 0, 0.0);
  };
  double a = bin.lo;
  double b = bin.hi;
  double x = bin.lo + (bin.hi - bin.lo) * std::clamp(target / cdf(bin.hi), 0.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    double r = cdf(x) - target;
    if (r > 0.0) b = x; else a = x;
    if (b - a <= 1e-14 * b) break;
    double dx = d(x);
    double next = dx > 0.0 ? x - r / dx : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::fabs(next - x) <= 1e-15 * x) return next;
    x = next;
  }
  return x;
}

double MeasureSampler::draw(Rng& rng) const {
  if (bins_.empty()) throw Error(ErrorCode::kPrecondition, "sampling from an empty measure");
  double t = rng.uniform() * total_;
  auto it = std::upper_bound(bins_.begin(), bins_.end(), t,
                             [](double v, const Bin& b) { return v < b.cum; });
  if (it == bins_.end()) it = std::prev(bins_.end());
  if (it->part < 0) return it->lo;
  double before = it == bins_.begin() ? 0.0 : std::prev(it)->cum;
  return invert(*it, t - before);
}

JointSampler::JointSampler(const JointJumpMeasure& measure, double eps, int bins) {
  for (const auto& a : measure.atoms()) {
    if (std::max(a.u1, a.u2) <= eps) continue;
    total_ += a.mass;
    components_.push_back({total_, 0.0, 0.0, {}, a.u1, a.u2});
  }
  for (const auto& c : measure.curves()) {
    double m = std::max(c.c1, c.c2);
    MeasureSampler s(c.base, Interval{eps / m, kInf, false}, bins);
    if (s.empty()) continue;
    total_ += s.mass();
    components_.push_back({total_, c.c1, c.c2, std::move(s), 0.0, 0.0});
  }
  for (const auto& p : measure.axis_parts()) {
    MeasureSampler s(p.measure, Interval{eps, kInf, false}, bins);
    if (s.empty()) continue;
    total_ += s.mass();
    double c1 = p.axis == Axis::kFirst ? 1.0 : 0.0;
    components_.push_back({total_, c1, 1.0 - c1, std::move(s), 0.0, 0.0});
  }
}

std::array<double, 2> JointSampler::draw(Rng& rng) const {
  if (components_.empty()) throw Error(ErrorCode::kPrecondition, "sampling from an empty measure");
  double t = rng.uniform() * total_;
  auto it = std::upper_bound(components_.begin(), components_.end(), t,
                             [](double v, const Component& c) { return v < c.cum; });
  if (it == components_.end()) it = std::prev(components_.end());
  if (it->base.empty()) return {it->u1, it->u2};
  double u = it->base.draw(rng);
  return {it->c1 * u, it->c2 * u};
}

}  // namespace bgw
