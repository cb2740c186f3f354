#pragma once

#include <sliderule/scale.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sliderule {

/// Rendering constraints for tick generation. These are physical drawing
/// gaps, independent of the legibility bound h used by accuracy analysis.
struct TickPolicy {
  double min_gap_mm = 0.7;
  double min_label_gap_mm = 6.0;
  int max_levels = 3;
  std::vector<double> special_values;
  double font_size_mm = 2.5;

  void validate() const;
};

/// level 0 = major (always labeled), 1 = medium, 2 = minor.
struct Tick {
  double value = 0.0;
  double pos_mm = 0.0;
  int level = 0;
  std::optional<std::string> label;

  bool operator==(const Tick&) const = default;
};

/// A label drawn at a distance that corresponds to no finite value, such as
/// the infinity mark at the origin of a reciprocal scale.
struct EndpointLabel {
  double pos_mm = 0.0;
  std::string label;

  bool operator==(const EndpointLabel&) const = default;
};

struct TickSet {
  std::string scale_name;
  std::vector<Tick> ticks;  // sorted by pos_mm
  std::vector<std::string> warnings;
  std::optional<EndpointLabel> origin_label;
};

TickSet generate_ticks(const ScaleSpec& scale, const TickPolicy& policy = {});

struct DensestGap {
  double value_a = 0.0;
  double value_b = 0.0;
  double gap_mm = 0.0;
};

/// Adjacent pair (in position order) with the smallest gap. Throws
/// InvalidInput for fewer than two ticks.
DensestGap densest_gap(const TickSet& ticks);

/// Renderer-independent width estimate: 0.6 * font size per character.
double label_width_mm(std::string_view label, double font_size_mm);

/// Shortest fixed-point text that reproduces a grid value.
std::string format_tick_value(double value);

}  // namespace sliderule
