#pragma once

// Jump measures on (0, inf) and [0, inf)^2.
//
// A one-dimensional measure is a finite set of atoms plus a list of density
// parts, each supported on a half-open interval (lo, hi]. A two-dimensional
// measure is assembled from atoms, push-forwards of a one-dimensional measure
// along a ray u -> (c1 u, c2 u), and one-dimensional measures sitting on a
// coordinate axis. Arbitrary planar densities are not represented.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "bgw/quadrature.hpp"

namespace bgw {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval (lo, hi], or [lo, hi] when lo_closed is set.
struct Interval {
  double lo = 0.0;
  double hi = kInf;
  bool lo_closed = false;

  bool contains(double u) const { return (lo_closed ? u >= lo : u > lo) && u <= hi; }
  bool empty() const { return lo_closed ? hi < lo : hi <= lo; }
  Interval intersect(const Interval& other) const;
  /// Preimage under u -> c u for c > 0.
  Interval divided_by(double c) const;

  static Interval positive() { return {0.0, kInf, false}; }
  static Interval nonnegative() { return {0.0, kInf, true}; }
};

struct Rect {
  Interval u1 = Interval::nonnegative();
  Interval u2 = Interval::nonnegative();
  bool contains(double a, double b) const { return u1.contains(a) && u2.contains(b); }
};

struct Atom {
  double location;
  double mass;
};

/// Nonnegative density on (lo, hi]. Built-in forms keep their closed form so
/// that the F6 sufficient rules can read f(z) = z^2 * density(z) directly.
class DensityPart {
 public:
  enum class Kind { kPower, kLogPower, kCustom };

  /// coef * u^exponent on (lo, hi]
  static DensityPart power(double coef, double exponent, double lo, double hi);
  /// coef * (-log u) * u^exponent on (lo, hi], hi <= 1
  static DensityPart log_power(double coef, double exponent, double lo, double hi);
  static DensityPart constant(double value, double lo, double hi);
  static DensityPart custom(std::function<double(double)> fn, double lo, double hi,
                            std::vector<double> breakpoints = {}, std::string label = "custom");

  double operator()(double u) const;
  Kind kind() const noexcept { return kind_; }
  double coef() const noexcept { return coef_; }
  double exponent() const noexcept { return exponent_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::string& label() const noexcept { return label_; }

  /// Same density restricted to (lo, hi] intersected with the support.
  DensityPart restricted(double lo, double hi) const;
  /// Image under u -> c u (c > 0).
  DensityPart scaled(double c) const;

 private:
  DensityPart() = default;
  Kind kind_ = Kind::kPower;
  double coef_ = 0.0;
  double exponent_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> breakpoints_;
  std::shared_ptr<const std::function<double(double)>> fn_;
  std::string label_;
};

enum class Validation { kCheckF0, kSkip };

class JumpMeasure {
 public:
  JumpMeasure() = default;
  /// Rejects (ErrorCode::kParameter) non-positive atoms, negative densities,
  /// and, with Validation::kCheckF0, measures with an infinite integral of z^2 ^ 1.
  JumpMeasure(std::vector<Atom> atoms, std::vector<DensityPart> densities,
              Validation validation = Validation::kCheckF0);

  static JumpMeasure zero() { return {}; }
  static JumpMeasure atom(double location, double mass);
  static JumpMeasure density(DensityPart part, Validation validation = Validation::kCheckF0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<DensityPart>& densities() const noexcept { return densities_; }
  bool is_zero() const noexcept { return atoms_.empty() && densities_.empty(); }
  bool has_densities() const noexcept { return !densities_.empty(); }

  /// Integral of f over `region` (default (0, inf)). Throws kNonConvergent on divergence.
  double integrate(const std::function<double(double)>& f, const Interval& region = Interval::positive(),
                   const QuadOptions& options = {}) const;
  /// lambda([u, inf)).
  double tail(double u, const QuadOptions& options = {}) const;
  double total_mass(const QuadOptions& options = {}) const;
  /// Largest support point (inf for unbounded densities, 0 for the zero measure).
  double support_sup() const;

  JumpMeasure restricted(const Interval& region) const;
  JumpMeasure scaled(double c) const;
  JumpMeasure operator+(const JumpMeasure& other) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPart> densities_;
};

/// Free-function form of JumpMeasure::integrate.
double integrate(const JumpMeasure& measure, const std::function<double(double)>& integrand,
                 const Interval& region = Interval::positive(), double rel_tol = 1e-8);

enum class Axis { kFirst, kSecond };

class JointJumpMeasure {
 public:
  struct Atom2 {
    double u1;
    double u2;
    double mass;
  };
  /// Push-forward of `base` under u -> (c1 u, c2 u).
  struct Curve {
    JumpMeasure base;
    double c1;
    double c2;
  };
  /// `measure` on one axis times a unit atom at 0 on the other.
  struct AxisPart {
    Axis axis;
    JumpMeasure measure;
  };

  JointJumpMeasure() = default;
  JointJumpMeasure(std::vector<Atom2> atoms, std::vector<Curve> curves, std::vector<AxisPart> axes,
                   Validation validation = Validation::kCheckF0);

  static JointJumpMeasure zero() { return {}; }
  static JointJumpMeasure atom(double u1, double u2, double mass);
  /// Image of mu under u -> (q u, (1 - q) u).
  static JointJumpMeasure sex_split_image(const JumpMeasure& mu, double q);
  static JointJumpMeasure curve(const JumpMeasure& base, double c1, double c2);
  static JointJumpMeasure on_axis(Axis axis, const JumpMeasure& measure);

  const std::vector<Atom2>& atoms() const noexcept { return atoms_; }
  const std::vector<Curve>& curves() const noexcept { return curves_; }
  const std::vector<AxisPart>& axis_parts() const noexcept { return axes_; }
  bool is_zero() const noexcept { return atoms_.empty() && curves_.empty() && axes_.empty(); }

  double integrate(const std::function<double(double, double)>& f, const Rect& region = {},
                   const QuadOptions& options = {}) const;

  /// Part with max(u1, u2) > eps.
  JointJumpMeasure outside_box(double eps) const;
  /// Part with 0 < max(u1, u2) <= eps.
  JointJumpMeasure inside_box(double eps) const;
  /// Push-forward under u -> u_c, restricted to u_c > 0.
  JumpMeasure projection(Axis axis) const;

  JointJumpMeasure operator+(const JointJumpMeasure& other) const;

 private:
  JointJumpMeasure restricted_by_norm(double lo, double hi, bool lo_closed) const;

  std::vector<Atom2> atoms_;
  std::vector<Curve> curves_;
  std::vector<AxisPart> axes_;
};

double integrate(const JointJumpMeasure& measure,
                 const std::function<double(double, double)>& integrand, const Rect& region = {},
                 double rel_tol = 1e-8);

/// nu = nu_f(du1) delta_0(du2) + delta_0(du1) nu_m(du2) + nu_S(du1, du2).
JointJumpMeasure combine_nu(const JumpMeasure& nu_f, const JumpMeasure& nu_m,
                            const JointJumpMeasure& nu_s);

}  // namespace bgw
