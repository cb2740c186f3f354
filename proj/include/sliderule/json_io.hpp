#pragma once

#include <sliderule/analysis.hpp>
#include <sliderule/registry.hpp>
#include <sliderule/render.hpp>
#include <sliderule/scale.hpp>
#include <sliderule/tickgen.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sliderule {

using Json = nlohmann::json;

/// Context for reading scale definitions.
struct ParseContext {
  /// Earth radius override in km for horizon scales without params.R.
  std::optional<double> radius_km;
  /// Length inherited from an enclosing layout when a scale omits length_mm.
  std::optional<double> default_length_mm;
};

/// Parses text, reporting syntax errors as "line L, column C: ...".
Json parse_json_text(std::string_view text, std::string_view source = "input");

/// Line and column (1-based) where the value at a JSON pointer starts in
/// `text`. Falls back to the nearest existing ancestor; nullopt when the text
/// does not parse.
std::optional<std::pair<std::size_t, std::size_t>> locate_json_pointer(std::string_view text,
                                                                       std::string_view pointer);

/// Prefixes a "/pointer: message" error with "source:line:col: " when the
/// pointer can be found in `text`; other messages get "source: ".
std::string anchor_message(std::string_view message, std::string_view text,
                           std::string_view source, std::string_view strip_prefix = "");

/// ScaleSpec JSON:
///   {name, kind, params:{alpha|base|R}, length_mm, unit?, zoom, x_min, x_max,
///    units_label, orientation}
/// Inside a layout, a bare string names a registry scale.
ScaleSpec scale_from_json(const Json& j, const ParseContext& ctx = {},
                          const std::string& path = "");
Json to_json(const ScaleSpec& scale);

TickPolicy policy_from_json(const Json& j, const std::string& path = "/policy");
Json to_json(const TickPolicy& policy);

Json to_json(const TickSet& ticks);

/// RuleLayout JSON:
///   {length_mm, row_height_mm?, margins_mm?, policy?, body_top[], slide[], body_bottom[]}
RuleLayout layout_from_json(const Json& j, const ParseContext& ctx = {});
/// Geometry summary of an assembled layout.
Json geometry_json(const RuleLayout& layout);

SlideState slide_state_from_json(const Json& j);
Json to_json(const std::vector<ReadOut>& readout);

Json to_json(const AccuracyReport& report);
Json to_json(const AlignmentReport& report);
Json to_json(const TriangleReport& report);
Json to_json(const CoincidencePair& pair);

Json registry_json(const std::vector<RegistryEntry>& registry);

// Field helpers shared by the request decoders.
double require_number(const Json& j, std::string_view key, const std::string& path);
std::optional<double> optional_number(const Json& j, std::string_view key,
                                      const std::string& path);

}  // namespace sliderule
