#pragma once

#include <sliderule/json_io.hpp>

#include <string>
#include <string_view>

namespace sliderule {

// Request handling shared by the CLI and the HTTP service, so that both front
// ends produce byte-identical documents for identical inputs.

enum class AnalysisKind { Accuracy, Alignment, Triangle, Coincidence };

AnalysisKind analysis_kind_from_string(std::string_view name);
const char* to_string(AnalysisKind kind) noexcept;

/// x_C values probed by the coincidence table mode.
inline constexpr double kCoincidenceTable[] = {1.496, 4.000, 4.976, 10.000};

/// Request bodies:
///   accuracy     {scale, h?, separation_factor?}
///   alignment    {scale1, scale2, rational_bound?, rational_tol?}
///   triangle     {a, scale, h?, separation_factor?, radians?} or {a, x_lo, x_hi, radians?}
///   coincidence  {x_C} | {x_R} | {}   (empty: table mode)
Json analyze(AnalysisKind kind, const Json& request, const ParseContext& ctx = {});

/// {layout: geometry, tick_sets: [...], svg}; the body is a RuleLayout with an
/// optional "state": {slide_offset_mm, hairline_mm}.
Json rule_response(const Json& body, const ParseContext& ctx = {});

/// Hairline read-out for {layout, slide_offset_mm, hairline_mm}.
Json read_response(const Json& body, const ParseContext& ctx = {});

/// Canonical text form of a response document.
std::string serialize(const Json& doc);

}  // namespace sliderule
