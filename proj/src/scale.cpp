#include <sliderule/scale.hpp>

#include <sliderule/errors.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sliderule {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_positive(double v) { return std::isfinite(v) && v > 0; }

}  // namespace

const char* to_string(FunctionKind kind) noexcept {
  switch (kind) {
    case FunctionKind::Log: return "log";
    case FunctionKind::Power: return "power";
    case FunctionKind::Horizon: return "horizon";
    case FunctionKind::LogLog: return "loglog";
    case FunctionKind::Equidistant: return "equidistant";
  }
  return "?";
}

FunctionKind function_kind_from_string(const std::string& name) {
  if (name == "log") return FunctionKind::Log;
  if (name == "power") return FunctionKind::Power;
  if (name == "horizon") return FunctionKind::Horizon;
  if (name == "loglog") return FunctionKind::LogLog;
  if (name == "equidistant") return FunctionKind::Equidistant;
  throw InvalidInput(fmt::format("unknown scale kind '{}'", name));
}

const char* to_string(Orientation o) noexcept {
  return o == Orientation::LeftToRight ? "left_to_right" : "right_to_left";
}

Orientation orientation_from_string(const std::string& name) {
  if (name == "left_to_right") return Orientation::LeftToRight;
  if (name == "right_to_left") return Orientation::RightToLeft;
  throw InvalidInput(fmt::format("unknown orientation '{}'", name));
}

bool Interval::contains(double x) const noexcept {
  if (std::isnan(x)) return false;
  const bool above = lo_open ? x > lo : x >= lo;
  const bool below = hi_open ? x < hi : x <= hi;
  return above && below;
}

ScaleFunction ScaleFunction::log(double base) {
  if (!finite_positive(base) || base == 1.0)
    throw InvalidInput(fmt::format("log base must be positive and != 1, got {}", base));
  return {FunctionKind::Log, base};
}

ScaleFunction ScaleFunction::power(double alpha) {
  if (!std::isfinite(alpha) || alpha == 0.0)
    throw InvalidInput(fmt::format("power exponent must be finite and nonzero, got {}", alpha));
  return {FunctionKind::Power, alpha};
}

ScaleFunction ScaleFunction::horizon(double radius) {
  if (!finite_positive(radius))
    throw InvalidInput(fmt::format("horizon radius must be positive, got {}", radius));
  return {FunctionKind::Horizon, radius};
}

ScaleFunction ScaleFunction::loglog(double base) {
  if (!std::isfinite(base) || base <= 1.0)
    throw InvalidInput(fmt::format("loglog base must be > 1, got {}", base));
  return {FunctionKind::LogLog, base};
}

ScaleFunction ScaleFunction::equidistant() { return {FunctionKind::Equidistant, 0.0}; }

Interval ScaleFunction::domain() const noexcept {
  switch (kind_) {
    case FunctionKind::Log: return {0.0, kInf, true, true};
    case FunctionKind::Power:
      return param_ > 0 ? Interval{0.0, kInf, false, true} : Interval{0.0, kInf, true, true};
    case FunctionKind::Horizon: return {0.0, kInf, false, true};
    case FunctionKind::LogLog: return {1.0, kInf, true, true};
    case FunctionKind::Equidistant: return {-kInf, kInf, true, true};
  }
  return {0, 0, true, true};
}

bool ScaleFunction::increasing() const noexcept {
  switch (kind_) {
    case FunctionKind::Log: return param_ > 1.0;
    case FunctionKind::Power: return param_ > 0.0;
    default: return true;
  }
}

double ScaleFunction::operator()(double x) const {
  const Interval dom = domain();
  if (!dom.contains(x)) {
    if (std::isnan(x)) throw DomainError("f(x) is undefined for NaN");
    if (x < dom.lo || (dom.lo_open && x == dom.lo))
      throw DomainError(fmt::format("{} scale: x = {} violates lower bound x {} {}",
                                    to_string(kind_), x, dom.lo_open ? ">" : ">=", dom.lo));
    throw DomainError(fmt::format("{} scale: x = {} violates upper bound x < {}",
                                  to_string(kind_), x, dom.hi));
  }
  switch (kind_) {
    case FunctionKind::Log:
      if (param_ == 10.0) return std::log10(x);
      if (param_ == 2.0) return std::log2(x);
      return std::log(x) / std::log(param_);
    case FunctionKind::Power:
      if (param_ == 1.0) return x;
      if (param_ == 2.0) return x * x;
      if (param_ == -1.0) return 1.0 / x;
      return std::pow(x, param_);
    case FunctionKind::Horizon: {
      // R*acos(R/(R+x)) rewritten as R*atan(sqrt(x(2R+x))/R), which avoids
      // the cancellation of acos near 1 for heights much smaller than R.
      const double r = param_;
      return r * std::atan2(std::sqrt(x * (2.0 * r + x)), r);
    }
    case FunctionKind::LogLog: return std::log10(std::log(x) / std::log(param_));
    case FunctionKind::Equidistant: return x;
  }
  return 0.0;
}

double ScaleFunction::inverse(double y) const {
  if (std::isnan(y)) throw DomainError("inverse of NaN");
  switch (kind_) {
    case FunctionKind::Log:
      if (param_ == 10.0) return std::pow(10.0, y);
      return std::exp(y * std::log(param_));
    case FunctionKind::Power:
      if (y < 0)
        throw DomainError(fmt::format("power scale: f = {} is outside the image [0, inf)", y));
      if (param_ == 1.0) return y;
      if (param_ == 2.0) return std::sqrt(y);
      if (param_ == -1.0) return y == 0.0 ? kInf : 1.0 / y;
      return y == 0.0 ? (param_ > 0 ? 0.0 : kInf) : std::pow(y, 1.0 / param_);
    case FunctionKind::Horizon: {
      const double r = param_;
      const double limit = r * std::numbers::pi / 2.0;
      if (y < 0 || y >= limit)
        throw DomainError(
            fmt::format("horizon scale: f = {} is outside the image [0, {})", y, limit));
      // R*(1/cos(t) - 1) = R*2 sin^2(t/2)/cos(t)
      const double t = y / r;
      const double s = std::sin(t / 2.0);
      return r * 2.0 * s * s / std::cos(t);
    }
    case FunctionKind::LogLog: return std::exp(std::pow(10.0, y) * std::log(param_));
    case FunctionKind::Equidistant: return y;
  }
  return 0.0;
}

std::optional<double> ScaleFunction::natural_origin() const {
  switch (kind_) {
    case FunctionKind::Log: return 1.0;
    case FunctionKind::Power: return param_ > 0 ? 0.0 : kInf;
    case FunctionKind::Horizon: return 0.0;
    case FunctionKind::LogLog: return param_;
    case FunctionKind::Equidistant: return 0.0;
  }
  return std::nullopt;
}

bool ScaleFunction::homogeneous() const noexcept {
  return kind_ == FunctionKind::Power || kind_ == FunctionKind::Equidistant;
}

double ScaleFunction::exponent() const noexcept {
  return kind_ == FunctionKind::Power ? param_ : 1.0;
}

double invert_monotone(const std::function<double(double)>& f, double target, double lo,
                       double hi, double rel_tol) {
  if (!(lo < hi)) throw InvalidInput("bisection needs lo < hi");
  double f_lo = f(lo);
  const double f_hi = f(hi);
  const bool inc = f_hi > f_lo;
  if ((inc && (target < f_lo || target > f_hi)) || (!inc && (target > f_lo || target < f_hi)))
    throw RangeError(fmt::format("target {} not bracketed by f([{}, {}])", target, lo, hi));
  for (int i = 0; i < 400; ++i) {
    const double mid = lo + (hi - lo) / 2.0;
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    if (hi - lo <= rel_tol * scale || mid == lo || mid == hi) break;
    const double f_mid = f(mid);
    if (f_mid == target) return mid;
    if ((f_mid < target) == inc) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2.0;
}

ScaleSpec ScaleSpec::build(const ScaleDefinition& def) {
  ScaleSpec s;
  if (def.name.empty()) throw InvalidInput("scale name must not be empty");
  if (!finite_positive(def.length_mm))
    throw InvalidInput(fmt::format("scale {}: length_mm must be positive, got {}", def.name,
                                   def.length_mm));
  if (!finite_positive(def.zoom))
    throw InvalidInput(
        fmt::format("scale {}: zoom must be positive, got {}", def.name, def.zoom));

  s.name_ = def.name;
  s.fn_ = def.function;
  s.length_ = def.length_mm;
  s.zoom_ = def.zoom;
  s.units_label_ = def.units_label;
  s.orientation_ = def.orientation;

  const bool inc = s.fn_.increasing();
  const std::optional<double>& near = inc ? def.x_min : def.x_max;
  const std::optional<double>& far = inc ? def.x_max : def.x_min;
  const char* near_name = inc ? "x_min" : "x_max";
  const char* far_name = inc ? "x_max" : "x_min";

  if (!near)
    throw InvalidInput(fmt::format("scale {}: {} is required", def.name, near_name));

  auto eval = [&](double x, const char* what) {
    try {
      return s.fn_(x);
    } catch (const DomainError& e) {
      throw InvalidInput(fmt::format("scale {}: {}: {}", def.name, what, e.what()));
    }
  };

  const double f_near = eval(*near, near_name);
  s.natural_ = f_near >= 0.0;
  s.f0_ = s.natural_ ? 0.0 : f_near;

  if (def.unit) {
    if (far)
      throw InvalidInput(fmt::format(
          "scale {}: give either unit or {}, not both (one of them pins the geometry)",
          def.name, far_name));
    if (!finite_positive(*def.unit))
      throw InvalidInput(
          fmt::format("scale {}: unit must be positive, got {}", def.name, *def.unit));
    s.unit_ = *def.unit;
    double far_value = 0;
    try {
      far_value = s.fn_.inverse(s.f0_ + s.length_ / (s.unit_ * s.zoom_));
    } catch (const DomainError& e) {
      throw InvalidInput(fmt::format("scale {}: length cannot be filled with unit {}: {}",
                                     def.name, s.unit_, e.what()));
    }
    if (!std::isfinite(far_value))
      throw InvalidInput(fmt::format("scale {}: derived {} is not finite", def.name, far_name));
    (inc ? s.x_max_ : s.x_min_) = far_value;
    (inc ? s.x_min_ : s.x_max_) = *near;
  } else {
    if (!far)
      throw InvalidInput(
          fmt::format("scale {}: either unit or {} must be given", def.name, far_name));
    s.x_min_ = *def.x_min;
    s.x_max_ = *def.x_max;
    if (!(s.x_min_ < s.x_max_))
      throw InvalidInput(fmt::format("scale {}: x_min ({}) must be below x_max ({})", def.name,
                                     s.x_min_, s.x_max_));
    const double span = eval(*far, far_name) - s.f0_;
    if (!(span > 0) || !std::isfinite(span))
      throw InvalidInput(fmt::format("scale {}: range has zero extent", def.name));
    s.unit_ = s.length_ / (s.zoom_ * span);
  }
  if (!(s.x_min_ < s.x_max_))
    throw InvalidInput(fmt::format("scale {}: derived range is empty", def.name));
  return s;
}

double ScaleSpec::origin_value() const {
  if (natural_) return *fn_.natural_origin();
  return fn_.increasing() ? x_min_ : x_max_;
}

bool ScaleSpec::contains(double x) const noexcept {
  const double tol_lo = 1e-12 * std::abs(x_min_);
  const double tol_hi = 1e-12 * std::abs(x_max_);
  return x >= x_min_ - tol_lo && x <= x_max_ + tol_hi;
}

double ScaleSpec::position(double x) const {
  if (!contains(x))
    throw RangeError(fmt::format("scale {}: x = {} is outside the range [{}, {}]", name_, x,
                                 x_min_, x_max_));
  return placement(x);
}

double ScaleSpec::placement(double x) const { return unit_ * zoom_ * (fn_(x) - f0_); }

double ScaleSpec::value_at(double d) const {
  const double tol = 1e-9 * length_;
  if (std::isnan(d) || d < -tol || d > length_ + tol)
    throw RangeError(
        fmt::format("scale {}: distance {} mm is outside [0, {}]", name_, d, length_));
  d = std::clamp(d, 0.0, length_);
  const double x = fn_.inverse(f0_ + d / (unit_ * zoom_));
  if (!std::isfinite(x)) return x;
  if (std::abs(placement(x) - d) <= tol) return x;

  // Closed form lost precision; fall back to bisection inside the drawn range.
  const double p_lo = placement(x_min_);
  const double p_hi = placement(x_max_);
  if (d < std::min(p_lo, p_hi) || d > std::max(p_lo, p_hi)) return x;
  return invert_monotone([this](double v) { return placement(v); }, d, x_min_, x_max_);
}

ScaleSpec ScaleSpec::with_zoom(double zoom) const {
  ScaleDefinition def = definition();
  def.zoom = zoom;
  def.unit = unit_;
  (fn_.increasing() ? def.x_max : def.x_min).reset();
  return build(def);
}

ScaleDefinition ScaleSpec::definition() const {
  return ScaleDefinition{.name = name_,
                         .function = fn_,
                         .length_mm = length_,
                         .zoom = zoom_,
                         .unit = std::nullopt,
                         .x_min = x_min_,
                         .x_max = x_max_,
                         .units_label = units_label_,
                         .orientation = orientation_};
}

double evaluate_f(const ScaleFunction& fn, double x) { return fn(x); }

double position(const ScaleSpec& scale, double x) { return scale.position(x); }

double value_at(const ScaleSpec& scale, double d) { return scale.value_at(d); }

std::optional<double> zoom_related(const ScaleSpec& a, const ScaleSpec& b) {
  if (!(a.function() == b.function())) return std::nullopt;
  const double f0a = a.origin_offset();
  const double f0b = b.origin_offset();
  if (std::abs(f0a - f0b) > 1e-12 * std::max({1.0, std::abs(f0a), std::abs(f0b)}))
    return std::nullopt;
  return (b.unit() * b.zoom()) / (a.unit() * a.zoom());
}

}  // namespace sliderule
