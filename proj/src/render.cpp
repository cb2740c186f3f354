#include <sliderule/render.hpp>

#include <sliderule/errors.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace sliderule {

const char* to_string(Band band) noexcept {
  switch (band) {
    case Band::BodyTop: return "body_top";
    case Band::Slide: return "slide";
    case Band::BodyBottom: return "body_bottom";
  }
  return "?";
}

RuleLayout RuleLayout::build(double length_mm, const std::vector<ScaleSpec>& body_top,
                             const std::vector<ScaleSpec>& slide,
                             const std::vector<ScaleSpec>& body_bottom, const TickPolicy& policy,
                             double row_height_mm, double margin_mm) {
  if (!(length_mm > 0) || !std::isfinite(length_mm))
    throw InvalidInput(fmt::format("layout length_mm must be positive, got {}", length_mm));
  if (!(row_height_mm > 0) || !std::isfinite(row_height_mm))
    throw InvalidInput(fmt::format("row_height_mm must be positive, got {}", row_height_mm));
  if (!(margin_mm >= 0) || !std::isfinite(margin_mm))
    throw InvalidInput(fmt::format("margins_mm must be non-negative, got {}", margin_mm));
  policy.validate();
  if (body_top.empty() && slide.empty() && body_bottom.empty())
    throw InvalidInput("layout needs at least one scale row");

  RuleLayout layout;
  layout.length_ = length_mm;
  layout.row_height_ = row_height_mm;
  layout.margin_ = margin_mm;
  layout.policy_ = policy;

  std::set<std::string> names;
  const auto add = [&](Band band, const std::vector<ScaleSpec>& scales) {
    for (const ScaleSpec& s : scales) {
      if (std::abs(s.length_mm() - length_mm) > 1e-9 * length_mm)
        throw InvalidInput(fmt::format("scale {} has length {} mm, layout has {} mm", s.name(),
                                       s.length_mm(), length_mm));
      if (!names.insert(s.name()).second)
        throw InvalidInput(fmt::format("scale name {} appears twice in the layout", s.name()));
      layout.rows_.push_back({band, s, generate_ticks(s, policy)});
    }
  };
  add(Band::BodyTop, body_top);
  add(Band::Slide, slide);
  add(Band::BodyBottom, body_bottom);
  return layout;
}

double RuleLayout::width_px() const noexcept { return (length_ + 2 * margin_) * kPxPerMm; }

double RuleLayout::height_px() const noexcept {
  return (static_cast<double>(rows_.size()) * row_height_ + 2 * margin_) * kPxPerMm;
}

double RuleLayout::row_top_mm(std::size_t i) const noexcept {
  return margin_ + static_cast<double>(i) * row_height_;
}

double RuleLayout::x_px(const ScaleSpec& scale, double pos_mm) const noexcept {
  const double along = scale.orientation() == Orientation::LeftToRight ? pos_mm : length_ - pos_mm;
  return margin_ * kPxPerMm + along * kPxPerMm;
}

void SlideState::validate(const RuleLayout& layout) const {
  if (!std::isfinite(slide_offset_mm))
    throw InvalidInput("slide_offset_mm must be finite");
  const double l = layout.length_mm();
  if (!std::isfinite(hairline_mm) || hairline_mm < 0 || hairline_mm > l)
    throw InvalidInput(
        fmt::format("hairline_mm must lie in [0, {}], got {}", l, hairline_mm));
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kTickFraction[] = {0.45, 0.3, 0.2};

void render_row(std::string& svg, const RuleLayout& layout, std::size_t index) {
  const LayoutRow& row = layout.rows()[index];
  const double top = layout.row_top_mm(index) * kPxPerMm;
  const double height = layout.row_height_mm() * kPxPerMm;
  const double font = layout.policy().font_size_mm * kPxPerMm;
  // Even rows hang their ticks from the top edge with labels below; odd rows
  // grow them from the bottom edge with labels above.
  const bool from_top = index % 2 == 0;
  const double edge = from_top ? top : top + height;
  const double dir = from_top ? 1.0 : -1.0;

  svg += fmt::format(R"(  <g class="scale" id="scale-{0}" data-name="{0}" data-band="{1}">)",
                     xml_escape(row.scale.name()), to_string(row.band));
  svg += '\n';
  svg += fmt::format(
      R"(    <rect class="band" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000" stroke-width="0.5"/>)",
      layout.margin_mm() * kPxPerMm, top, layout.length_mm() * kPxPerMm, height);
  svg += '\n';
  svg += fmt::format(
      R"(    <text class="scale-name" x="{}" y="{}" font-size="{}" text-anchor="end">{}</text>)",
      layout.margin_mm() * kPxPerMm - font * 0.5, top + height / 2 + font / 3, font,
      xml_escape(row.scale.name()));
  svg += '\n';

  for (const Tick& t : row.ticks.ticks) {
    const double x = layout.x_px(row.scale, t.pos_mm);
    const double len = kTickFraction[std::clamp(t.level, 0, 2)] * height;
    svg += fmt::format(
        R"(    <line class="tick level-{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000" stroke-width="{}"/>)",
        t.level, x, edge, x, edge + dir * len, t.level == 0 ? 1.0 : 0.6);
    svg += '\n';
    if (t.label) {
      const double y = from_top ? edge + len + font : edge - len - font * 0.25;
      svg += fmt::format(
          R"(    <text class="label" x="{}" y="{}" font-size="{}" text-anchor="middle">{}</text>)",
          x, y, t.level == 0 ? font : font * 0.8, xml_escape(*t.label));
      svg += '\n';
    }
  }
  if (row.ticks.origin_label) {
    const double x = layout.x_px(row.scale, row.ticks.origin_label->pos_mm);
    const double y = from_top ? edge + kTickFraction[0] * height + font
                              : edge - kTickFraction[0] * height - font * 0.25;
    svg += fmt::format(
        R"(    <text class="label origin" x="{}" y="{}" font-size="{}" text-anchor="middle">{}</text>)",
        x, y, font, xml_escape(row.ticks.origin_label->label));
    svg += '\n';
  }
  svg += "  </g>\n";
}

}  // namespace

std::string render_svg(const RuleLayout& layout, const std::optional<SlideState>& state) {
  if (state) state->validate(layout);
  std::string svg;
  svg += R"(<?xml version="1.0" encoding="UTF-8" standalone="no"?>)";
  svg += '\n';
  svg += fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}" font-family="sans-serif">)",
      layout.width_px(), layout.height_px());
  svg += '\n';

  const auto& rows = layout.rows();
  const auto emit_band = [&](Band band, std::string_view cls, double dx) {
    bool open = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].band != band) continue;
      if (!open) {
        if (dx != 0.0)
          svg += fmt::format(R"svg(<g class="{}" transform="translate({},0)">)svg", cls, dx);
        else
          svg += fmt::format(R"(<g class="{}">)", cls);
        svg += '\n';
        open = true;
      }
      render_row(svg, layout, i);
    }
    if (open) svg += "</g>\n";
  };
  emit_band(Band::BodyTop, "body body-top", 0.0);
  emit_band(Band::Slide, "slide", state ? state->slide_offset_mm * kPxPerMm : 0.0);
  emit_band(Band::BodyBottom, "body body-bottom", 0.0);

  if (state) {
    const double x = layout.margin_mm() * kPxPerMm + state->hairline_mm * kPxPerMm;
    const double y0 = layout.row_top_mm(0) * kPxPerMm - layout.margin_mm() * kPxPerMm * 0.5;
    const double y1 = layout.row_top_mm(rows.size()) * kPxPerMm + layout.margin_mm() * kPxPerMm * 0.5;
    svg += fmt::format(
        R"(<line class="hairline" x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#c00" stroke-width="1"/>)",
        x, y0, y1);
    svg += '\n';
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<ReadOut> read_hairline(const RuleLayout& layout, const SlideState& state) {
  state.validate(layout);
  const double l = layout.length_mm();
  std::vector<ReadOut> out;
  out.reserve(layout.rows().size());
  for (const LayoutRow& row : layout.rows()) {
    const double physical =
        row.band == Band::Slide ? state.hairline_mm - state.slide_offset_mm : state.hairline_mm;
    const double d = row.scale.orientation() == Orientation::LeftToRight ? physical : l - physical;
    ReadOut r{row.scale.name(), std::nullopt, false};
    if (d >= -1e-9 * l && d <= l * (1 + 1e-9)) {
      const double x = row.scale.value_at(d);
      if (std::isfinite(x)) {
        r.value = x;
        r.in_range = row.scale.contains(x);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sliderule
