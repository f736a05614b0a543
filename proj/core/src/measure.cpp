#include "bgw/measure.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "bgw/errors.hpp"

namespace bgw {

Interval Interval::intersect(const Interval& other) const {
  Interval out;
  if (lo > other.lo) {
    out.lo = lo;
    out.lo_closed = lo_closed;
  } else if (other.lo > lo) {
    out.lo = other.lo;
    out.lo_closed = other.lo_closed;
  } else {
    out.lo = lo;
    out.lo_closed = lo_closed && other.lo_closed;
  }
  out.hi = std::min(hi, other.hi);
  return out;
}

Interval Interval::divided_by(double c) const { return {lo / c, hi / c, lo_closed}; }

// ---------------------------------------------------------------- DensityPart

namespace {

void check_support(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo)) {
    throw Error(ErrorCode::kParameter, "density support must satisfy 0 <= lo < hi");
  }
}

}  // namespace

DensityPart DensityPart::power(double coef, double exponent, double lo, double hi) {
  check_support(lo, hi);
  if (!(coef >= 0.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::kParameter, "power density needs coef >= 0 and a finite exponent");
  }
  DensityPart d;
  d.kind_ = Kind::kPower;
  d.coef_ = coef;
  d.exponent_ = exponent;
  d.lo_ = lo;
  d.hi_ = hi;
  d.label_ = "power";
  return d;
}

DensityPart DensityPart::log_power(double coef, double exponent, double lo, double hi) {
  check_support(lo, hi);
  if (hi > 1.0) throw Error(ErrorCode::kParameter, "log_power density must live in (0, 1]");
  if (!(coef >= 0.0)) throw Error(ErrorCode::kParameter, "log_power density needs coef >= 0");
  DensityPart d;
  d.kind_ = Kind::kLogPower;
  d.coef_ = coef;
  d.exponent_ = exponent;
  d.lo_ = lo;
  d.hi_ = hi;
  d.label_ = "log_power";
  return d;
}

DensityPart DensityPart::constant(double value, double lo, double hi) {
  DensityPart d = power(value, 0.0, lo, hi);
  d.label_ = "constant";
  return d;
}

DensityPart DensityPart::custom(std::function<double(double)> fn, double lo, double hi,
                                std::vector<double> breakpoints, std::string label) {
  check_support(lo, hi);
  DensityPart d;
  d.kind_ = Kind::kCustom;
  d.lo_ = lo;
  d.hi_ = hi;
  d.breakpoints_ = std::move(breakpoints);
  d.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
  d.label_ = std::move(label);
  double top = std::isfinite(hi) ? hi : lo + 100.0;
  for (int k = 1; k <= 64; ++k) {
    double u = lo + (top - lo) * k / 64.0;
    if ((*d.fn_)(u) < 0.0) throw Error(ErrorCode::kParameter, "density '" + d.label_ + "' is negative");
  }
  return d;
}

double DensityPart::operator()(double u) const {
  if (!(u > lo_ && u <= hi_)) return 0.0;
  switch (kind_) {
    case Kind::kPower: return exponent_ == 0.0 ? coef_ : coef_ * std::pow(u, exponent_);
    case Kind::kLogPower: return coef_ * (-std::log(u)) * std::pow(u, exponent_);
    case Kind::kCustom: return (*fn_)(u);
  }
  return 0.0;
}

DensityPart DensityPart::restricted(double lo, double hi) const {
  DensityPart d = *this;
  d.lo_ = std::max(lo_, lo);
  d.hi_ = std::min(hi_, hi);
  return d;
}

DensityPart DensityPart::scaled(double c) const {
  if (!(c > 0.0)) throw Error(ErrorCode::kParameter, "scale factor must be positive");
  if (c == 1.0) return *this;
  DensityPart d = *this;
  d.lo_ = lo_ * c;
  d.hi_ = hi_ * c;
  for (double& b : d.breakpoints_) b *= c;
  if (kind_ == Kind::kPower) {
    d.coef_ = coef_ * std::pow(c, -exponent_ - 1.0);
    return d;
  }
  DensityPart original = *this;
  d.kind_ = Kind::kCustom;
  d.fn_ = std::make_shared<const std::function<double(double)>>(
      [original, c](double z) { return original(z / c) / c; });
  d.label_ = label_ + "*" + std::to_string(c);
  return d;
}

// ---------------------------------------------------------------- JumpMeasure

JumpMeasure::JumpMeasure(std::vector<Atom> atoms, std::vector<DensityPart> densities,
                         Validation validation)
    : atoms_(std::move(atoms)), densities_(std::move(densities)) {
  for (const Atom& a : atoms_) {
    if (!(a.location > 0.0) || !std::isfinite(a.location) || !(a.mass > 0.0) ||
        !std::isfinite(a.mass)) {
      throw Error(ErrorCode::kParameter, "atoms need positive finite location and mass");
    }
  }
  if (validation == Validation::kCheckF0) {
    try {
      integrate([](double z) { return std::min(z * z, 1.0); });
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonConvergent) throw;
      throw Error(ErrorCode::kParameter, "measure violates the integrability of z^2 ^ 1");
    }
  }
}

JumpMeasure JumpMeasure::atom(double location, double mass) {
  return JumpMeasure({{location, mass}}, {}, Validation::kSkip);
}

JumpMeasure JumpMeasure::density(DensityPart part, Validation validation) {
  return JumpMeasure({}, {std::move(part)}, validation);
}

double JumpMeasure::integrate(const std::function<double(double)>& f, const Interval& region,
                              const QuadOptions& options) const {
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (region.contains(a.location)) total += a.mass * f(a.location);
  }
  for (const DensityPart& d : densities_) {
    double lo = std::max(d.lo(), region.lo);
    double hi = std::min(d.hi(), region.hi);
    if (!(hi > lo)) continue;
    total += integrate_interval([&](double u) { return f(u) * d(u); }, lo, hi, d.breakpoints(),
                                options);
  }
  return total;
}

double JumpMeasure::tail(double u, const QuadOptions& options) const {
  return integrate([](double) { return 1.0; }, Interval{u, kInf, true}, options);
}

double JumpMeasure::total_mass(const QuadOptions& options) const {
  return integrate([](double) { return 1.0; }, Interval::positive(), options);
}

double JumpMeasure::support_sup() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s = std::max(s, a.location);
  for (const DensityPart& d : densities_) s = std::max(s, d.hi());
  return s;
}

JumpMeasure JumpMeasure::restricted(const Interval& region) const {
  JumpMeasure out;
  for (const Atom& a : atoms_) {
    if (region.contains(a.location)) out.atoms_.push_back(a);
  }
  for (const DensityPart& d : densities_) {
    double lo = std::max(d.lo(), region.lo);
    double hi = std::min(d.hi(), region.hi);
    if (hi > lo) out.densities_.push_back(d.restricted(lo, hi));
  }
  return out;
}

JumpMeasure JumpMeasure::scaled(double c) const {
  JumpMeasure out;
  for (const Atom& a : atoms_) out.atoms_.push_back({a.location * c, a.mass});
  for (const DensityPart& d : densities_) out.densities_.push_back(d.scaled(c));
  return out;
}

JumpMeasure JumpMeasure::operator+(const JumpMeasure& other) const {
  JumpMeasure out = *this;
  out.atoms_.insert(out.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  out.densities_.insert(out.densities_.end(), other.densities_.begin(), other.densities_.end());
  return out;
}

double integrate(const JumpMeasure& measure, const std::function<double(double)>& integrand,
                 const Interval& region, double rel_tol) {
  QuadOptions options;
  options.rel_tol = rel_tol;
  return measure.integrate(integrand, region, options);
}

// ----------------------------------------------------------- JointJumpMeasure

JointJumpMeasure::JointJumpMeasure(std::vector<Atom2> atoms, std::vector<Curve> curves,
                                   std::vector<AxisPart> axes, Validation validation)
    : atoms_(std::move(atoms)), curves_(std::move(curves)), axes_(std::move(axes)) {
  for (const Atom2& a : atoms_) {
    if (!(a.u1 >= 0.0) || !(a.u2 >= 0.0) || (a.u1 == 0.0 && a.u2 == 0.0) || !(a.mass > 0.0) ||
        !std::isfinite(a.u1 + a.u2 + a.mass)) {
      throw Error(ErrorCode::kParameter, "planar atoms need a nonzero location in the quadrant");
    }
  }
  for (const Curve& c : curves_) {
    if (!(c.c1 >= 0.0) || !(c.c2 >= 0.0) || (c.c1 == 0.0 && c.c2 == 0.0)) {
      throw Error(ErrorCode::kParameter, "curve direction must be nonzero and nonnegative");
    }
  }
  if (validation == Validation::kCheckF0) {
    try {
      integrate([](double a, double b) { return std::min(a * a + b * b, 1.0); });
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonConvergent) throw;
      throw Error(ErrorCode::kParameter,
                  "planar measure violates the integrability of 1 ^ (u1^2 + u2^2)");
    }
  }
}

JointJumpMeasure JointJumpMeasure::atom(double u1, double u2, double mass) {
  return JointJumpMeasure({{u1, u2, mass}}, {}, {}, Validation::kSkip);
}

JointJumpMeasure JointJumpMeasure::sex_split_image(const JumpMeasure& mu, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kParameter, "q must lie in [0, 1]");
  return curve(mu, q, 1.0 - q);
}

JointJumpMeasure JointJumpMeasure::curve(const JumpMeasure& base, double c1, double c2) {
  if (base.is_zero()) return {};
  return JointJumpMeasure({}, {{base, c1, c2}}, {}, Validation::kCheckF0);
}

JointJumpMeasure JointJumpMeasure::on_axis(Axis axis, const JumpMeasure& measure) {
  if (measure.is_zero()) return {};
  return JointJumpMeasure({}, {}, {{axis, measure}}, Validation::kSkip);
}

double JointJumpMeasure::integrate(const std::function<double(double, double)>& f,
                                   const Rect& region, const QuadOptions& options) const {
  double total = 0.0;
  for (const Atom2& a : atoms_) {
    if (region.contains(a.u1, a.u2)) total += a.mass * f(a.u1, a.u2);
  }
  for (const Curve& c : curves_) {
    Interval range = Interval::positive();
    bool skip = false;
    for (auto [coef, iv] : {std::pair{c.c1, region.u1}, std::pair{c.c2, region.u2}}) {
      if (coef > 0.0) {
        range = range.intersect(iv.divided_by(coef));
      } else if (!iv.contains(0.0)) {
        skip = true;
      }
    }
    if (skip || range.empty()) continue;
    double c1 = c.c1;
    double c2 = c.c2;
    total += c.base.integrate([&](double u) { return f(c1 * u, c2 * u); }, range, options);
  }
  for (const AxisPart& p : axes_) {
    if (p.axis == Axis::kFirst) {
      if (!region.u2.contains(0.0)) continue;
      total += p.measure.integrate([&](double u) { return f(u, 0.0); },
                                   region.u1.intersect(Interval::positive()), options);
    } else {
      if (!region.u1.contains(0.0)) continue;
      total += p.measure.integrate([&](double u) { return f(0.0, u); },
                                   region.u2.intersect(Interval::positive()), options);
    }
  }
  return total;
}

JointJumpMeasure JointJumpMeasure::restricted_by_norm(double lo, double hi, bool lo_closed) const {
  JointJumpMeasure out;
  Interval norm{lo, hi, lo_closed};
  for (const Atom2& a : atoms_) {
    if (norm.contains(std::max(a.u1, a.u2))) out.atoms_.push_back(a);
  }
  for (const Curve& c : curves_) {
    double m = std::max(c.c1, c.c2);
    JumpMeasure base = c.base.restricted(norm.divided_by(m));
    if (!base.is_zero()) out.curves_.push_back({std::move(base), c.c1, c.c2});
  }
  for (const AxisPart& p : axes_) {
    JumpMeasure m = p.measure.restricted(norm);
    if (!m.is_zero()) out.axes_.push_back({p.axis, std::move(m)});
  }
  return out;
}

JointJumpMeasure JointJumpMeasure::outside_box(double eps) const {
  return restricted_by_norm(eps, kInf, false);
}

JointJumpMeasure JointJumpMeasure::inside_box(double eps) const {
  return restricted_by_norm(0.0, eps, false);
}

JumpMeasure JointJumpMeasure::projection(Axis axis) const {
  std::vector<Atom> atoms;
  JumpMeasure out;
  for (const Atom2& a : atoms_) {
    double u = axis == Axis::kFirst ? a.u1 : a.u2;
    if (u > 0.0) atoms.push_back({u, a.mass});
  }
  if (!atoms.empty()) out = JumpMeasure(std::move(atoms), {}, Validation::kSkip);
  for (const Curve& c : curves_) {
    double coef = axis == Axis::kFirst ? c.c1 : c.c2;
    if (coef > 0.0) out = out + c.base.scaled(coef);
  }
  for (const AxisPart& p : axes_) {
    if (p.axis == axis) out = out + p.measure;
  }
  return out;
}

JointJumpMeasure JointJumpMeasure::operator+(const JointJumpMeasure& other) const {
  JointJumpMeasure out = *this;
  out.atoms_.insert(out.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  out.curves_.insert(out.curves_.end(), other.curves_.begin(), other.curves_.end());
  out.axes_.insert(out.axes_.end(), other.axes_.begin(), other.axes_.end());
  return out;
}

double integrate(const JointJumpMeasure& measure,
                 const std::function<double(double, double)>& integrand, const Rect& region,
                 double rel_tol) {
  QuadOptions options;
  options.rel_tol = rel_tol;
  return measure.integrate(integrand, region, options);
}

JointJumpMeasure combine_nu(const JumpMeasure& nu_f, const JumpMeasure& nu_m,
                            const JointJumpMeasure& nu_s) {
  return JointJumpMeasure::on_axis(Axis::kFirst, nu_f) +
         JointJumpMeasure::on_axis(Axis::kSecond, nu_m) + nu_s;
}

}  // namespace bgw
