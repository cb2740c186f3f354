#pragma once

#include <sliderule/scale.hpp>

#include <array>
#include <optional>
#include <string>

namespace sliderule {

// ---------------------------------------------------------------- accuracy

/// Legibility criterion: the marks x and separation_factor*x must lie at
/// least h mm apart. 1.01 reads two significant decimals, 1.001 three.
struct AccuracyParams {
  double h = 0.5;
  double separation_factor = 1.01;

  void validate() const;
};

enum class RangeEnd { XMin, XMax, None };
const char* to_string(RangeEnd end) noexcept;

struct AccuracyReport {
  bool feasible = false;
  RangeEnd binding_end = RangeEnd::None;
  /// Minimal scale unit (at the scale's zoom) that resolves the binding value.
  double required_u = 0.0;
  /// Smallest (increasing separation) or largest (decreasing separation)
  /// resolvable value. May lie outside the scale range; absent when no closed
  /// bound exists and nothing in range is resolvable.
  std::optional<double> resolvable_x_bound;
  /// Part of [x_min, x_max] whose marks are resolvable; absent when empty.
  std::optional<std::array<double, 2>> resolvable_range;
};

/// Minimal unit u with u*|sf^alpha - 1|*x^alpha >= h at the binding value x
/// (x_min for alpha > 0, x_max for alpha < 0).
double required_unit(double alpha, const AccuracyParams& params, double binding_x);

/// Physical distance between the marks x and sf*x on the scale, in mm.
double mark_separation(const ScaleSpec& scale, const AccuracyParams& params, double x);

/// True when x and sf*x can be told apart on the scale. Works for every kind.
bool check_accuracy(const ScaleSpec& scale, const AccuracyParams& params, double x);

/// Resolvable part of the scale. Homogeneous scales use the inverse-function
/// closed form, log scales have constant separation, and horizon/loglog scales
/// are searched numerically on the raw separation criterion.
AccuracyReport resolvable_bound(const ScaleSpec& scale, const AccuracyParams& params);

// --------------------------------------------------------------- alignment

struct RationalWitness {
  long p = 1;
  long q = 1;
  int exponent = 0;  // T = p/q * 10^exponent
};

struct AlignmentOptions {
  long max_term = 10;
  double rel_tol = 1e-6;
};

struct AlignmentReport {
  double T = 1.0;
  std::string aligned_pair_rule;
  bool equivalent = false;
  std::optional<RationalWitness> rational_witness;
  /// Range of the second scale, used to validate aligned values.
  std::array<double, 2> scale2_range{0.0, 0.0};
};

/// Detects T = p/q * 10^k (any integer k) with p, q <= max_term, using
/// continued-fraction convergents.
std::optional<RationalWitness> easy_rational(double T, const AlignmentOptions& options = {});

/// Alignment ratio of two power scales sharing exponent, length and origin.
/// T is the ratio of the far-end values (x_max for alpha > 0).
AlignmentReport alignment(const ScaleSpec& scale1, const ScaleSpec& scale2,
                          const AlignmentOptions& options = {});

/// The value on scale 2 drawn directly at x1 of scale 1.
double aligned_value(const AlignmentReport& report, double x1);

// ---------------------------------------------------------------- triangles

enum class AngleUnit { Degrees, Radians };

/// Right triangles c = sqrt(a^2 + b^2) whose legs and hypotenuse all fit in
/// [x_lo, x_hi], for a fixed leg a.
struct TriangleReport {
  double a = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double angle_low = 0.0;
  double angle_high = 0.0;
  AngleUnit angle_unit = AngleUnit::Degrees;
  bool feasible = false;
  std::optional<std::array<double, 2>> b_interval;
  std::optional<std::array<double, 2>> c_interval;
};

TriangleReport triangle_range(double a, double x_lo, double x_hi,
                              AngleUnit unit = AngleUnit::Degrees);

// ------------------------------------------------------------- coincidence

/// Values under one hairline when R's 1 sits over C's 10: x_R = 1/log10(x_C).
struct CoincidencePair {
  double x_C = 10.0;
  double x_R = 1.0;
};

CoincidencePair coincidence_from_C(double x_C);
CoincidencePair coincidence_from_R(double x_R);

// ----------------------------------------------------------------- horizon

/// Distance between an observer at height `observer` and the top of an object
/// of height `target`, both measured in the horizon function's length unit.
double horizon_distance(const ScaleFunction& horizon, double observer, double target);

}  // namespace sliderule
