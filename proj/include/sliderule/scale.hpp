#pragma once

#include <functional>
#include <optional>
#include <string>

namespace sliderule {

enum class FunctionKind { Log, Power, Horizon, LogLog, Equidistant };

const char* to_string(FunctionKind kind) noexcept;
FunctionKind function_kind_from_string(const std::string& name);

/// Interval of real numbers; bounds may be infinite.
struct Interval {
  double lo;
  double hi;
  bool lo_open;
  bool hi_open;

  bool contains(double x) const noexcept;
};

/// A strictly monotone distance function f. Values are written at distance
/// u*c*f(x) from the origin mark of a scale.
///
///   Log(base)       f(x) = log_base(x)                  x > 0
///   Power(alpha)    f(x) = x^alpha                      x >= 0 (x > 0 when alpha < 0)
///   Horizon(R)      f(x) = R*acos(R/(R+x))              x >= 0, bounded by R*pi/2
///   LogLog(base)    f(x) = log10(log_base(x))           x > 1
///   Equidistant     f(x) = x
class ScaleFunction {
 public:
  static ScaleFunction log(double base = 10.0);
  static ScaleFunction power(double alpha);
  static ScaleFunction horizon(double radius);
  static ScaleFunction loglog(double base = 2.718281828459045);
  static ScaleFunction equidistant();

  FunctionKind kind() const noexcept { return kind_; }

  /// base (Log, LogLog), alpha (Power), radius (Horizon); 0 for Equidistant.
  double parameter() const noexcept { return param_; }

  Interval domain() const noexcept;
  bool increasing() const noexcept;

  /// Evaluates f(x); throws DomainError naming the violated bound.
  double operator()(double x) const;

  /// Closed-form f^-1(y). Throws DomainError when y is outside the image of f.
  /// The reciprocal (and any Power with alpha < 0) maps y = 0 to +infinity.
  double inverse(double y) const;

  /// The value where f vanishes, if any. +infinity for Power with alpha < 0.
  std::optional<double> natural_origin() const;

  /// True when f(c*x) = c^alpha * f(x) (Power and Equidistant).
  bool homogeneous() const noexcept;
  /// The homogeneity exponent (1 for Equidistant); only meaningful when homogeneous().
  double exponent() const noexcept;

  bool operator==(const ScaleFunction&) const = default;

 private:
  ScaleFunction(FunctionKind kind, double param) : kind_(kind), param_(param) {}

  FunctionKind kind_;
  double param_;
};

/// Solves f(x) = target for monotone f on [lo, hi] by bisection. Stops when the
/// bracket is narrower than rel_tol * max(|lo|, |hi|, tiny).
double invert_monotone(const std::function<double(double)>& f, double target,
                       double lo, double hi, double rel_tol = 1e-12);

enum class Orientation { LeftToRight, RightToLeft };

const char* to_string(Orientation o) noexcept;
Orientation orientation_from_string(const std::string& name);

/// Unvalidated description of a scale. Exactly one of `unit` or the far-end
/// bound pins the geometry: with a unit, only the origin-side bound is given
/// (x_min for increasing f, x_max for decreasing f) and the other is derived.
struct ScaleDefinition {
  std::string name;
  ScaleFunction function = ScaleFunction::log();
  double length_mm = 250.0;
  double zoom = 1.0;
  std::optional<double> unit;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::string units_label;
  Orientation orientation = Orientation::LeftToRight;
};

/// A validated, immutable scale.
///
/// position(x) = u * c * (f(x) - f0), where f0 is f at the origin mark. f0 is 0
/// whenever every value of the range lies on the same side of f's zero as the
/// far end (C at 1, Q at 0, reciprocal at infinity, horizon at 0); otherwise it
/// is f at the origin-side range end.
class ScaleSpec {
 public:
  static ScaleSpec build(const ScaleDefinition& def);

  const std::string& name() const noexcept { return name_; }
  const ScaleFunction& function() const noexcept { return fn_; }
  double length_mm() const noexcept { return length_; }
  double unit() const noexcept { return unit_; }
  double zoom() const noexcept { return zoom_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  const std::string& units_label() const noexcept { return units_label_; }
  Orientation orientation() const noexcept { return orientation_; }

  /// f0, the function value at the origin mark.
  double origin_offset() const noexcept { return f0_; }
  /// The value drawn at distance 0; +infinity for a reciprocal scale whose
  /// origin is the limit point.
  double origin_value() const;
  /// True when the origin is f's own zero rather than a range end.
  bool natural_origin() const noexcept { return natural_; }

  bool contains(double x) const noexcept;

  /// Distance from the origin for x in [x_min, x_max]; throws RangeError otherwise.
  double position(double x) const;
  /// Same formula without the range check (function domain still enforced).
  double placement(double x) const;
  /// Inverse of position for d in [0, L]; throws RangeError otherwise.
  double value_at(double d) const;

  /// Same function, unit and origin-side bound with a different zoom factor;
  /// the far-end bound is re-derived to fill the length.
  ScaleSpec with_zoom(double zoom) const;

  /// Round-trippable definition (range form, no unit).
  ScaleDefinition definition() const;

 private:
  ScaleSpec() = default;

  std::string name_;
  ScaleFunction fn_ = ScaleFunction::log();
  double length_ = 0;
  double unit_ = 0;
  double zoom_ = 1;
  double x_min_ = 0;
  double x_max_ = 0;
  double f0_ = 0;
  bool natural_ = true;
  std::string units_label_;
  Orientation orientation_ = Orientation::LeftToRight;
};

/// Evaluates the scale function; free-function form of ScaleFunction::operator().
double evaluate_f(const ScaleFunction& fn, double x);

double position(const ScaleSpec& scale, double x);
double value_at(const ScaleSpec& scale, double d);

/// k such that position_b(x) = k * position_a(x) for every x, or nullopt when
/// the scales do not share function and origin.
std::optional<double> zoom_related(const ScaleSpec& a, const ScaleSpec& b);

}  // namespace sliderule
