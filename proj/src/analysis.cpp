#include <sliderule/analysis.hpp>

#include <sliderule/errors.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace sliderule {

void AccuracyParams::validate() const {
  if (!std::isfinite(h) || h < 0)
    throw InvalidInput(fmt::format("h must be a non-negative length, got {}", h));
  if (!std::isfinite(separation_factor) || separation_factor <= 1.0)
    throw InvalidInput(
        fmt::format("separation_factor must exceed 1, got {}", separation_factor));
}

const char* to_string(RangeEnd end) noexcept {
  switch (end) {
    case RangeEnd::XMin: return "x_min";
    case RangeEnd::XMax: return "x_max";
    case RangeEnd::None: return "none";
  }
  return "none";
}

double required_unit(double alpha, const AccuracyParams& params, double binding_x) {
  params.validate();
  if (!std::isfinite(alpha) || alpha == 0.0)
    throw InvalidInput(fmt::format("invalid exponent alpha = {}", alpha));
  if (!(binding_x > 0) || !std::isfinite(binding_x))
    throw DomainError(fmt::format("binding value must be positive, got {}", binding_x));
  const double gain = std::abs(std::pow(params.separation_factor, alpha) - 1.0);
  return params.h / (gain * std::pow(binding_x, alpha));
}

double mark_separation(const ScaleSpec& scale, const AccuracyParams& params, double x) {
  const ScaleFunction& f = scale.function();
  const double neighbour = params.separation_factor * x;
  return scale.unit() * scale.zoom() * std::abs(f(neighbour) - f(x));
}

bool check_accuracy(const ScaleSpec& scale, const AccuracyParams& params, double x) {
  params.validate();
  return mark_separation(scale, params, x) >= params.h * (1.0 - 1e-12);
}

namespace {

AccuracyReport homogeneous_bound(const ScaleSpec& scale, const AccuracyParams& p) {
  const ScaleFunction& f = scale.function();
  const double alpha = f.exponent();
  if (scale.x_min() < 0)
    throw DomainError(fmt::format(
        "scale {}: homogeneous accuracy analysis needs a non-negative range", scale.name()));
  if (!scale.natural_origin())
    throw DomainError(fmt::format(
        "scale {}: homogeneous accuracy analysis needs the origin at f = 0", scale.name()));

  const double uc = scale.unit() * scale.zoom();
  const double gain = std::abs(std::pow(p.separation_factor, alpha) - 1.0);
  // x bound = f^-1(h / (|sf^alpha - 1| * u))
  const double bound = f.inverse(p.h / (gain * uc));

  AccuracyReport r;
  if (std::isfinite(bound)) r.resolvable_x_bound = bound;
  double binding_x = 0;
  if (alpha > 0) {
    r.binding_end = RangeEnd::XMin;
    r.feasible = bound <= scale.x_max() * (1.0 + 1e-12);
    binding_x = std::clamp(bound, scale.x_min(), scale.x_max());
    if (r.feasible) r.resolvable_range = {{std::max(bound, scale.x_min()), scale.x_max()}};
  } else {
    r.binding_end = RangeEnd::XMax;
    r.feasible = bound >= scale.x_min() * (1.0 - 1e-12);
    binding_x = std::clamp(bound, scale.x_min(), scale.x_max());
    if (r.feasible) r.resolvable_range = {{scale.x_min(), std::min(bound, scale.x_max())}};
  }
  r.required_u = p.h == 0.0 ? 0.0 : required_unit(alpha, p, binding_x) / scale.zoom();
  return r;
}

AccuracyReport log_bound(const ScaleSpec& scale, const AccuracyParams& p) {
  const ScaleFunction& f = scale.function();
  const double sep_f = std::abs(f(p.separation_factor) - f(1.0));
  AccuracyReport r;
  r.binding_end = RangeEnd::None;
  r.required_u = p.h / (sep_f * scale.zoom());
  r.feasible = scale.unit() * scale.zoom() * sep_f >= p.h * (1.0 - 1e-12);
  if (r.feasible) {
    r.resolvable_x_bound = scale.x_min();
    r.resolvable_range = {{scale.x_min(), scale.x_max()}};
  }
  return r;
}

// Samples the separation over the range and refines the boundaries of the
// resolvable set by bisection.
AccuracyReport numeric_bound(const ScaleSpec& scale, const AccuracyParams& p) {
  constexpr int kSamples = 2048;
  const double lo = scale.x_min();
  const double hi = scale.x_max();
  const bool geometric = lo > 0;
  std::vector<double> xs(kSamples + 1);
  for (int i = 0; i <= kSamples; ++i) {
    const double t = static_cast<double>(i) / kSamples;
    xs[i] = geometric ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  xs.front() = lo;
  xs.back() = hi;

  const auto sep = [&](double x) { return mark_separation(scale, p, x); };
  const auto ok = [&](double x) { return sep(x) >= p.h * (1.0 - 1e-12); };

  int first = -1;
  int last = -1;
  for (int i = 0; i <= kSamples; ++i) {
    if (ok(xs[i])) {
      if (first < 0) first = i;
      last = i;
    }
  }

  AccuracyReport r;
  const bool min_side_tighter = sep(lo) <= sep(hi);
  if (first < 0) {
    r.feasible = false;
    r.binding_end = min_side_tighter ? RangeEnd::XMin : RangeEnd::XMax;
    const double x_b = min_side_tighter ? hi : lo;
    const double s = sep(x_b) / (scale.unit() * scale.zoom());
    r.required_u = s > 0 ? p.h / (s * scale.zoom()) : std::numeric_limits<double>::infinity();
    return r;
  }

  // Boundary between a failing sample a and a passing sample b.
  const auto refine = [&](double a, double b) {
    for (int i = 0; i < 200 && std::abs(b - a) > 1e-13 * std::max(std::abs(a), std::abs(b));
         ++i) {
      const double mid = a + (b - a) / 2.0;
      (ok(mid) ? b : a) = mid;
    }
    return b;
  };
  const double res_lo = first == 0 ? lo : refine(xs[first - 1], xs[first]);
  const double res_hi = last == kSamples ? hi : refine(xs[last + 1], xs[last]);

  r.feasible = true;
  r.resolvable_range = {{res_lo, res_hi}};
  double binding_x = 0;
  if (first > 0) {
    r.binding_end = RangeEnd::XMin;
    binding_x = res_lo;
  } else if (last < kSamples) {
    r.binding_end = RangeEnd::XMax;
    binding_x = res_hi;
  } else {
    r.binding_end = min_side_tighter ? RangeEnd::XMin : RangeEnd::XMax;
    binding_x = min_side_tighter ? lo : hi;
  }
  r.resolvable_x_bound = binding_x;
  const double s = sep(binding_x) / (scale.unit() * scale.zoom());
  r.required_u = p.h == 0.0 ? 0.0 : p.h / (s * scale.zoom());
  return r;
}

}  // namespace

AccuracyReport resolvable_bound(const ScaleSpec& scale, const AccuracyParams& params) {
  params.validate();
  switch (scale.function().kind()) {
    case FunctionKind::Power:
    case FunctionKind::Equidistant: return homogeneous_bound(scale, params);
    case FunctionKind::Log: return log_bound(scale, params);
    case FunctionKind::Horizon:
    case FunctionKind::LogLog: return numeric_bound(scale, params);
  }
  throw InvalidInput("unsupported scale kind");
}

namespace {

/// Best convergent p/q of m with p, q <= max_term, if within tolerance.
std::optional<std::pair<long, long>> small_convergent(double m, const AlignmentOptions& options) {
  long p_prev = 1, q_prev = 0;
  long p = static_cast<long>(std::floor(m)), q = 1;
  double rest = m - std::floor(m);
  for (int i = 0; i < 64; ++i) {
    if (p > options.max_term || q > options.max_term) break;
    if (p > 0 && std::abs(static_cast<double>(p) / static_cast<double>(q) - m) <= options.rel_tol * m)
      return std::pair{p, q};
    if (rest < 1e-15) break;
    const double inv = 1.0 / rest;
    const long a = static_cast<long>(std::floor(inv));
    rest = inv - static_cast<double>(a);
    const long p_next = a * p + p_prev;
    const long q_next = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  return std::nullopt;
}

}  // namespace

std::optional<RationalWitness> easy_rational(double T, const AlignmentOptions& options) {
  if (!(T > 0) || !std::isfinite(T)) return std::nullopt;
  int k = static_cast<int>(std::floor(std::log10(T)));
  const auto scaled = [&](int e) { return e >= 0 ? T / std::pow(10.0, e) : T * std::pow(10.0, -e); };
  double m = scaled(k);
  if (m >= 10.0) m = scaled(++k);
  if (m < 1.0) m = scaled(--k);
  // p/q lies in [1/10, 10], so with m in [1, 10) only m and m/10 need a look.
  if (const auto pq = small_convergent(m, options)) return RationalWitness{pq->first, pq->second, k};
  if (const auto pq = small_convergent(scaled(k + 1), options))
    return RationalWitness{pq->first, pq->second, k + 1};
  return std::nullopt;
}

AlignmentReport alignment(const ScaleSpec& scale1, const ScaleSpec& scale2,
                          const AlignmentOptions& options) {
  const ScaleFunction& f1 = scale1.function();
  const ScaleFunction& f2 = scale2.function();
  if (!f1.homogeneous() || !f2.homogeneous())
    throw IncompatibleScales(fmt::format("alignment needs power scales, got {} and {}",
                                         to_string(f1.kind()), to_string(f2.kind())));
  if (f1.exponent() != f2.exponent())
    throw IncompatibleScales(fmt::format("alignment needs equal exponents, got {} and {}",
                                         f1.exponent(), f2.exponent()));
  const double l1 = scale1.length_mm();
  const double l2 = scale2.length_mm();
  if (std::abs(l1 - l2) > 1e-9 * std::max(l1, l2))
    throw IncompatibleScales(
        fmt::format("alignment needs equal lengths, got {} and {} mm", l1, l2));
  if (!scale1.natural_origin() || !scale2.natural_origin() || scale1.x_min() < 0 ||
      scale2.x_min() < 0)
    throw IncompatibleScales("alignment needs both scales to start at f = 0");

  const bool inc = f1.increasing();
  const double far1 = inc ? scale1.x_max() : scale1.x_min();
  const double far2 = inc ? scale2.x_max() : scale2.x_min();

  AlignmentReport r;
  r.T = far2 / far1;
  r.aligned_pair_rule = fmt::format("x2 = {} * x1", r.T);
  r.rational_witness = easy_rational(r.T, options);
  r.equivalent = r.rational_witness.has_value();
  r.scale2_range = {scale2.x_min(), scale2.x_max()};
  return r;
}

double aligned_value(const AlignmentReport& report, double x1) {
  const double x2 = report.T * x1;
  const auto [lo, hi] = report.scale2_range;
  if (!(x2 >= lo - 1e-12 * std::abs(lo) && x2 <= hi + 1e-12 * std::abs(hi)))
    throw RangeError(
        fmt::format("aligned value {} is outside the second scale's range [{}, {}]", x2, lo, hi));
  return x2;
}

TriangleReport triangle_range(double a, double x_lo, double x_hi, AngleUnit unit) {
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_lo < x_hi) || x_lo < 0)
    throw InvalidInput(fmt::format("triangle range needs 0 <= x_lo < x_hi, got [{}, {}]", x_lo,
                                   x_hi));
  if (!(a >= x_lo && a <= x_hi) || !(a > 0))
    throw RangeError(
        fmt::format("leg a = {} is not readable on the range [{}, {}]", a, x_lo, x_hi));

  const double to_unit = unit == AngleUnit::Degrees ? 180.0 / std::numbers::pi : 1.0;
  TriangleReport r;
  r.a = a;
  r.angle_unit = unit;
  // b >= x_lo and c = a*sqrt(1 + tau^2) <= x_hi
  r.tau1 = x_lo / a;
  const double ratio = x_hi / a;
  r.tau2 = std::sqrt(std::max(0.0, ratio * ratio - 1.0));
  r.angle_low = std::atan(r.tau1) * to_unit;
  r.angle_high = std::atan(r.tau2) * to_unit;
  r.feasible = r.tau1 < r.tau2;
  if (r.feasible) {
    r.b_interval = {{a * r.tau1, a * r.tau2}};
    r.c_interval = {{a * std::sqrt(1.0 + r.tau1 * r.tau1), a * std::sqrt(1.0 + r.tau2 * r.tau2)}};
  }
  return r;
}

CoincidencePair coincidence_from_C(double x_C) {
  if (!(x_C > 1.0) || !std::isfinite(x_C))
    throw DomainError(fmt::format("coincidence needs x_C > 1, got {}", x_C));
  return {x_C, 1.0 / std::log10(x_C)};
}

CoincidencePair coincidence_from_R(double x_R) {
  if (!(x_R > 0.0) || !std::isfinite(x_R))
    throw DomainError(fmt::format("coincidence needs x_R > 0, got {}", x_R));
  return {std::pow(10.0, 1.0 / x_R), x_R};
}

double horizon_distance(const ScaleFunction& horizon, double observer, double target) {
  if (horizon.kind() != FunctionKind::Horizon)
    throw IncompatibleScales("horizon distance needs a horizon function");
  return horizon(observer) + horizon(target);
}

}  // namespace sliderule
