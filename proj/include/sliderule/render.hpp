#pragma once

#include <sliderule/scale.hpp>
#include <sliderule/tickgen.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sliderule {

/// SVG user units per millimetre.
inline constexpr double kPxPerMm = 4.0;

enum class Band { BodyTop, Slide, BodyBottom };
const char* to_string(Band band) noexcept;

struct LayoutRow {
  Band band;
  ScaleSpec scale;
  TickSet ticks;
};

/// Body scales above the slide, slide scales, body scales below. All scales
/// share one length.
class RuleLayout {
 public:
  static RuleLayout build(double length_mm, const std::vector<ScaleSpec>& body_top,
                          const std::vector<ScaleSpec>& slide,
                          const std::vector<ScaleSpec>& body_bottom,
                          const TickPolicy& policy = {}, double row_height_mm = 8.0,
                          double margin_mm = 10.0);

  double length_mm() const noexcept { return length_; }
  double row_height_mm() const noexcept { return row_height_; }
  double margin_mm() const noexcept { return margin_; }
  const TickPolicy& policy() const noexcept { return policy_; }
  /// Rows in drawing order (top body, slide, bottom body).
  const std::vector<LayoutRow>& rows() const noexcept { return rows_; }

  double width_px() const noexcept;
  double height_px() const noexcept;
  /// Top edge of row i in mm.
  double row_top_mm(std::size_t i) const noexcept;

  /// x coordinate (SVG units) of a distance from the origin of `scale`,
  /// before any slide translation. Right-to-left scales are mirrored.
  double x_px(const ScaleSpec& scale, double pos_mm) const noexcept;

 private:
  RuleLayout() = default;

  double length_ = 0;
  double row_height_ = 8;
  double margin_ = 10;
  TickPolicy policy_;
  std::vector<LayoutRow> rows_;
};

struct SlideState {
  double slide_offset_mm = 0.0;
  double hairline_mm = 0.0;

  void validate(const RuleLayout& layout) const;
};

std::string render_svg(const RuleLayout& layout, const std::optional<SlideState>& state);

struct ReadOut {
  std::string scale;
  std::optional<double> value;
  bool in_range = false;

  bool operator==(const ReadOut&) const = default;
};

/// What every scale shows under the hairline. Slide scales are read at
/// hairline - offset. Entries outside a scale's range are flagged, not errors.
std::vector<ReadOut> read_hairline(const RuleLayout& layout, const SlideState& state);

}  // namespace sliderule
