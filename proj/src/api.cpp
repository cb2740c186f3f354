#include <sliderule/api.hpp>

#include <sliderule/errors.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace sliderule {

namespace {

void allow_only(const Json& j, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw InvalidInput("/: request body must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw InvalidInput(fmt::format("/{}: unknown field", key));
}

const Json& require_field(const Json& j, std::string_view key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(fmt::format("/{}: required field is missing", key));
  return *it;
}

AccuracyParams accuracy_params(const Json& j) {
  AccuracyParams p;
  p.h = optional_number(j, "h", "").value_or(p.h);
  p.separation_factor = optional_number(j, "separation_factor", "").value_or(p.separation_factor);
  p.validate();
  return p;
}

bool flag(const Json& j, std::string_view key) {
  const auto it = j.find(key);
  if (it == j.end()) return false;
  if (!it->is_boolean()) throw InvalidInput(fmt::format("/{}: expected a boolean", key));
  return it->get<bool>();
}

Json accuracy(const Json& req, const ParseContext& ctx) {
  allow_only(req, {"scale", "h", "separation_factor"});
  const ScaleSpec scale = scale_from_json(require_field(req, "scale"), ctx, "/scale");
  return to_json(resolvable_bound(scale, accuracy_params(req)));
}

Json alignment_report(const Json& req, const ParseContext& ctx) {
  allow_only(req, {"scale1", "scale2", "rational_bound", "rational_tol"});
  const ScaleSpec s1 = scale_from_json(require_field(req, "scale1"), ctx, "/scale1");
  const ScaleSpec s2 = scale_from_json(require_field(req, "scale2"), ctx, "/scale2");
  AlignmentOptions opts;
  if (const auto bound = optional_number(req, "rational_bound", "")) {
    if (*bound < 1 || *bound != std::floor(*bound))
      throw InvalidInput("/rational_bound: expected a positive integer");
    opts.max_term = static_cast<long>(*bound);
  }
  opts.rel_tol = optional_number(req, "rational_tol", "").value_or(opts.rel_tol);
  if (!(opts.rel_tol > 0)) throw InvalidInput("/rational_tol: must be positive");
  return to_json(alignment(s1, s2, opts));
}

Json triangle(const Json& req, const ParseContext& ctx) {
  allow_only(req, {"a", "scale", "h", "separation_factor", "x_lo", "x_hi", "radians"});
  const double a = require_number(req, "a", "");
  const AngleUnit unit = flag(req, "radians") ? AngleUnit::Radians : AngleUnit::Degrees;
  if (req.contains("scale")) {
    if (req.contains("x_lo") || req.contains("x_hi"))
      throw InvalidInput("/x_lo: give either a scale or an explicit range, not both");
    const ScaleSpec scale = scale_from_json(req.at("scale"), ctx, "/scale");
    const AccuracyReport acc = resolvable_bound(scale, accuracy_params(req));
    if (!acc.resolvable_range)
      throw DomainError(fmt::format("scale {} has no resolvable range", scale.name()));
    return to_json(triangle_range(a, (*acc.resolvable_range)[0], (*acc.resolvable_range)[1], unit));
  }
  if (req.contains("h") || req.contains("separation_factor"))
    throw InvalidInput("/h: accuracy parameters need a scale");
  return to_json(
      triangle_range(a, require_number(req, "x_lo", ""), require_number(req, "x_hi", ""), unit));
}

Json coincidence(const Json& req) {
  allow_only(req, {"x_C", "x_R"});
  const auto xc = optional_number(req, "x_C", "");
  const auto xr = optional_number(req, "x_R", "");
  if (xc && xr) throw InvalidInput("/x_R: give x_C or x_R, not both");
  if (xc) return to_json(coincidence_from_C(*xc));
  if (xr) return to_json(coincidence_from_R(*xr));
  Json pairs = Json::array();
  for (double v : kCoincidenceTable) pairs.push_back(to_json(coincidence_from_C(v)));
  return Json{{"pairs", std::move(pairs)}};
}

}  // namespace

AnalysisKind analysis_kind_from_string(std::string_view name) {
  if (name == "accuracy") return AnalysisKind::Accuracy;
  if (name == "alignment") return AnalysisKind::Alignment;
  if (name == "triangle") return AnalysisKind::Triangle;
  if (name == "coincidence") return AnalysisKind::Coincidence;
  throw InvalidInput(fmt::format("unknown analysis kind '{}'", name));
}

const char* to_string(AnalysisKind kind) noexcept {
  switch (kind) {
    case AnalysisKind::Accuracy: return "accuracy";
    case AnalysisKind::Alignment: return "alignment";
    case AnalysisKind::Triangle: return "triangle";
    case AnalysisKind::Coincidence: return "coincidence";
  }
  return "?";
}

Json analyze(AnalysisKind kind, const Json& request, const ParseContext& ctx) {
  switch (kind) {
    case AnalysisKind::Accuracy: return accuracy(request, ctx);
    case AnalysisKind::Alignment: return alignment_report(request, ctx);
    case AnalysisKind::Triangle: return triangle(request, ctx);
    case AnalysisKind::Coincidence: return coincidence(request);
  }
  throw InvalidInput("unknown analysis kind");
}

Json rule_response(const Json& body, const ParseContext& ctx) {
  if (!body.is_object()) throw InvalidInput("/: request body must be a JSON object");
  Json layout_json = body;
  std::optional<SlideState> state;
  if (const auto it = body.find("state"); it != body.end()) {
    state = slide_state_from_json(*it);
    layout_json.erase("state");
  }
  const RuleLayout layout = layout_from_json(layout_json, ctx);
  Json tick_sets = Json::array();
  for (const LayoutRow& row : layout.rows()) tick_sets.push_back(to_json(row.ticks));
  return Json{{"layout", geometry_json(layout)},
              {"tick_sets", std::move(tick_sets)},
              {"svg", render_svg(layout, state)}};
}

Json read_response(const Json& body, const ParseContext& ctx) {
  allow_only(body, {"layout", "slide_offset_mm", "hairline_mm"});
  const RuleLayout layout = layout_from_json(require_field(body, "layout"), ctx);
  return to_json(read_hairline(layout, slide_state_from_json(body)));
}

std::string serialize(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace sliderule
