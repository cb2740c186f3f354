#include <sliderule/json_io.hpp>

#include <sliderule/errors.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <iterator>
#include <map>
#include <cmath>
#include <numbers>
#include <set>

namespace sliderule {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json pair_or_null(const std::optional<std::array<double, 2>>& p) {
  if (!p) return nullptr;
  return Json::array({(*p)[0], (*p)[1]});
}

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& path) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InvalidInput(fmt::format("{}/{}: unknown field", path, key));
  }
}

std::string require_string(const Json& j, std::string_view key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    throw InvalidInput(fmt::format("{}/{}: expected a string", path, key));
  return it->get<std::string>();
}

std::string optional_string(const Json& j, std::string_view key, const std::string& path,
                            std::string fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) throw InvalidInput(fmt::format("{}/{}: expected a string", path, key));
  return it->get<std::string>();
}

}  // namespace

double require_number(const Json& j, std::string_view key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(fmt::format("{}/{}: required number is missing", path, key));
  if (!it->is_number()) throw InvalidInput(fmt::format("{}/{}: expected a number", path, key));
  return it->get<double>();
}

std::optional<double> optional_number(const Json& j, std::string_view key,
                                      const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw InvalidInput(fmt::format("{}/{}: expected a number", path, key));
  return it->get<double>();
}

Json parse_json_text(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    // nlohmann prefixes its own position; keep only the description.
    std::string what = e.what();
    if (const auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw InvalidInput(fmt::format("{}:{}:{}: {}", source, line, col, what));
  }
}

namespace {

// Forward iterator over chars that records how far the parser has read.
struct CountingIterator {
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p = nullptr;
  const char* base = nullptr;
  std::size_t* high = nullptr;

  reference operator*() const { return *p; }
  CountingIterator& operator++() {
    ++p;
    *high = std::max(*high, static_cast<std::size_t>(p - base));
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator& o) const { return p == o.p; }
  bool operator!=(const CountingIterator& o) const { return p != o.p; }
};

// Records the read offset at which each member key and array element starts.
class PointerIndex : public nlohmann::json_sax<Json> {
 public:
  explicit PointerIndex(const std::size_t& offset) : offset_(offset) {}

  std::map<std::string, std::size_t> where;

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override { return open(false); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }
  bool key(string_t& k) override {
    frames_.back().key = k;
    where.emplace(path() + "/" + k, offset_);
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    bool array = false;
    std::size_t next = 0;
    std::string key;
    std::string self;
  };

  std::string path() const { return frames_.empty() ? "" : frames_.back().self; }
  std::string child() {
    if (frames_.empty()) return "";
    Frame& f = frames_.back();
    if (!f.array) return f.self + "/" + f.key;
    std::string p = f.self + "/" + std::to_string(f.next++);
    where.emplace(p, offset_);
    return p;
  }
  bool value() {
    child();
    return true;
  }
  bool open(bool array) {
    std::string self = child();
    where.emplace(self, offset_);
    frames_.push_back({array, 0, "", std::move(self)});
    return true;
  }
  bool close() {
    frames_.pop_back();
    return true;
  }

  const std::size_t& offset_;
  std::vector<Frame> frames_;
};

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> locate_json_pointer(std::string_view text,
                                                                       std::string_view pointer) {
  std::size_t high = 0;
  PointerIndex index(high);
  const CountingIterator first{text.data(), text.data(), &high};
  const CountingIterator last{text.data() + text.size(), text.data(), &high};
  if (!Json::sax_parse(first, last, &index)) return std::nullopt;
  std::string p(pointer);
  while (true) {
    if (const auto it = index.where.find(p); it != index.where.end()) {
      // The offset is just past the token; step back to the token itself.
      std::size_t off = it->second;
      while (off > 0 && off <= text.size() && std::isspace(static_cast<unsigned char>(text[off - 1])))
        --off;
      return line_col(text, off > 0 ? off - 1 : 0);
    }
    if (p.empty()) return std::nullopt;
    p.erase(p.rfind('/'));
  }
}

std::string anchor_message(std::string_view message, std::string_view text,
                           std::string_view source, std::string_view strip_prefix) {
  if (message.starts_with('/')) {
    const auto colon = message.find(": ");
    std::string_view pointer = message.substr(0, colon == std::string_view::npos ? 0 : colon);
    if (pointer == "/") pointer = "";
    if (!strip_prefix.empty() && pointer.starts_with(strip_prefix))
      pointer.remove_prefix(strip_prefix.size());
    if (const auto pos = locate_json_pointer(text, pointer))
      return fmt::format("{}:{}:{}: {}", source, pos->first, pos->second, message);
  }
  return fmt::format("{}: {}", source, message);
}

ScaleSpec scale_from_json(const Json& j, const ParseContext& ctx, const std::string& path) {
  if (j.is_string()) {
    if (!ctx.default_length_mm)
      throw InvalidInput(fmt::format("{}: registry scale names need an enclosing layout length",
                                     path.empty() ? "/" : path));
    try {
      return make_registry_scale(j.get<std::string>(), *ctx.default_length_mm, ctx.radius_km);
    } catch (const InvalidInput& e) {
      throw InvalidInput(fmt::format("{}: {}", path.empty() ? "/" : path, e.what()));
    }
  }
  if (!j.is_object())
    throw InvalidInput(fmt::format("{}: scale must be an object", path.empty() ? "/" : path));
  reject_unknown_keys(j,
                      {"name", "kind", "params", "length_mm", "unit", "zoom", "x_min", "x_max",
                       "units_label", "orientation"},
                      path);

  ScaleDefinition def;
  def.name = require_string(j, "name", path);
  const std::string kind = require_string(j, "kind", path);
  def.units_label = optional_string(j, "units_label", path, "");
  def.orientation = orientation_from_string(optional_string(j, "orientation", path, "left_to_right"));

  Json params = Json::object();
  if (const auto it = j.find("params"); it != j.end()) {
    if (!it->is_object()) throw InvalidInput(fmt::format("{}/params: expected an object", path));
    params = *it;
  }
  const std::string ppath = path + "/params";
  try {
    switch (function_kind_from_string(kind)) {
      case FunctionKind::Log:
        reject_unknown_keys(params, {"base"}, ppath);
        def.function = ScaleFunction::log(optional_number(params, "base", ppath).value_or(10.0));
        break;
      case FunctionKind::Power:
        reject_unknown_keys(params, {"alpha"}, ppath);
        def.function = ScaleFunction::power(require_number(params, "alpha", ppath));
        break;
      case FunctionKind::Horizon:
        reject_unknown_keys(params, {"R"}, ppath);
        def.function = ScaleFunction::horizon(optional_number(params, "R", ppath)
                                                  .value_or(earth_radius_in(def.units_label,
                                                                            ctx.radius_km)));
        break;
      case FunctionKind::LogLog:
        reject_unknown_keys(params, {"base"}, ppath);
        def.function =
            ScaleFunction::loglog(optional_number(params, "base", ppath).value_or(std::numbers::e));
        break;
      case FunctionKind::Equidistant:
        reject_unknown_keys(params, {}, ppath);
        def.function = ScaleFunction::equidistant();
        break;
    }
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    if (msg.starts_with(path + "/")) throw;
    throw InvalidInput(fmt::format("{}: {}", path.empty() ? "/" : path, msg));
  }

  const auto length = optional_number(j, "length_mm", path);
  if (!length && !ctx.default_length_mm)
    throw InvalidInput(fmt::format("{}/length_mm: required number is missing", path));
  def.length_mm = length.value_or(ctx.default_length_mm.value_or(0.0));
  def.zoom = optional_number(j, "zoom", path).value_or(1.0);
  def.unit = optional_number(j, "unit", path);
  def.x_min = optional_number(j, "x_min", path);
  def.x_max = optional_number(j, "x_max", path);
  try {
    return ScaleSpec::build(def);
  } catch (const InvalidInput& e) {
    throw InvalidInput(fmt::format("{}: {}", path.empty() ? "/" : path, e.what()));
  }
}

Json to_json(const ScaleSpec& s) {
  Json params = Json::object();
  const ScaleFunction& f = s.function();
  switch (f.kind()) {
    case FunctionKind::Log:
    case FunctionKind::LogLog: params["base"] = f.parameter(); break;
    case FunctionKind::Power: params["alpha"] = f.parameter(); break;
    case FunctionKind::Horizon: params["R"] = f.parameter(); break;
    case FunctionKind::Equidistant: break;
  }
  return Json{{"name", s.name()},
              {"kind", to_string(f.kind())},
              {"params", params},
              {"length_mm", s.length_mm()},
              {"zoom", s.zoom()},
              {"x_min", s.x_min()},
              {"x_max", s.x_max()},
              {"units_label", s.units_label()},
              {"orientation", to_string(s.orientation())}};
}

TickPolicy policy_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InvalidInput(fmt::format("{}: expected an object", path));
  reject_unknown_keys(
      j, {"min_gap_mm", "min_label_gap_mm", "max_levels", "special_values", "font_size_mm"}, path);
  TickPolicy p;
  p.min_gap_mm = optional_number(j, "min_gap_mm", path).value_or(p.min_gap_mm);
  p.min_label_gap_mm = optional_number(j, "min_label_gap_mm", path).value_or(p.min_label_gap_mm);
  p.font_size_mm = optional_number(j, "font_size_mm", path).value_or(p.font_size_mm);
  if (const auto it = j.find("max_levels"); it != j.end()) {
    if (!it->is_number_integer())
      throw InvalidInput(fmt::format("{}/max_levels: expected an integer", path));
    p.max_levels = it->get<int>();
  }
  if (const auto it = j.find("special_values"); it != j.end()) {
    if (!it->is_array())
      throw InvalidInput(fmt::format("{}/special_values: expected an array", path));
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_number())
        throw InvalidInput(fmt::format("{}/special_values/{}: expected a number", path, i));
      p.special_values.push_back((*it)[i].get<double>());
    }
  }
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    throw InvalidInput(fmt::format("{}: {}", path, e.what()));
  }
  return p;
}

Json to_json(const TickPolicy& p) {
  return Json{{"min_gap_mm", p.min_gap_mm},
              {"min_label_gap_mm", p.min_label_gap_mm},
              {"max_levels", p.max_levels},
              {"special_values", p.special_values},
              {"font_size_mm", p.font_size_mm}};
}

Json to_json(const TickSet& set) {
  Json ticks = Json::array();
  for (const Tick& t : set.ticks) {
    Json jt{{"value", t.value}, {"pos_mm", t.pos_mm}, {"level", t.level}};
    if (t.label) jt["label"] = *t.label;
    ticks.push_back(std::move(jt));
  }
  Json out{{"scale_name", set.scale_name}, {"ticks", std::move(ticks)}, {"warnings", set.warnings}};
  if (set.origin_label)
    out["origin_label"] = Json{{"pos_mm", set.origin_label->pos_mm},
                               {"label", set.origin_label->label}};
  return out;
}

RuleLayout layout_from_json(const Json& j, const ParseContext& ctx) {
  if (!j.is_object()) throw InvalidInput("/: layout must be an object");
  reject_unknown_keys(j,
                      {"length_mm", "row_height_mm", "margins_mm", "policy", "body_top", "slide",
                       "body_bottom"},
                      "");
  const double length = require_number(j, "length_mm", "");
  ParseContext inner = ctx;
  inner.default_length_mm = length;

  const auto rows = [&](std::string_view key) {
    std::vector<ScaleSpec> out;
    const auto it = j.find(key);
    if (it == j.end()) return out;
    if (!it->is_array()) throw InvalidInput(fmt::format("/{}: expected an array", key));
    for (std::size_t i = 0; i < it->size(); ++i)
      out.push_back(scale_from_json((*it)[i], inner, fmt::format("/{}/{}", key, i)));
    return out;
  };
  const auto top = rows("body_top");
  const auto slide = rows("slide");
  const auto bottom = rows("body_bottom");
  const TickPolicy policy =
      j.contains("policy") ? policy_from_json(j.at("policy")) : TickPolicy{};
  return RuleLayout::build(length, top, slide, bottom, policy,
                           optional_number(j, "row_height_mm", "").value_or(8.0),
                           optional_number(j, "margins_mm", "").value_or(10.0));
}

Json geometry_json(const RuleLayout& layout) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < layout.rows().size(); ++i) {
    const LayoutRow& row = layout.rows()[i];
    rows.push_back(Json{{"band", to_string(row.band)},
                        {"y_mm", layout.row_top_mm(i)},
                        {"scale", to_json(row.scale)},
                        {"unit", row.scale.unit()},
                        {"origin_value", number_or_null(row.scale.origin_value())},
                        {"extent_mm", Json::array({row.scale.position(row.scale.x_min()),
                                                   row.scale.position(row.scale.x_max())})}});
  }
  return Json{{"length_mm", layout.length_mm()},
              {"row_height_mm", layout.row_height_mm()},
              {"margins_mm", layout.margin_mm()},
              {"px_per_mm", kPxPerMm},
              {"width_px", layout.width_px()},
              {"height_px", layout.height_px()},
              {"policy", to_json(layout.policy())},
              {"rows", std::move(rows)}};
}

SlideState slide_state_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("/: expected an object");
  SlideState s;
  s.slide_offset_mm = optional_number(j, "slide_offset_mm", "").value_or(0.0);
  s.hairline_mm = require_number(j, "hairline_mm", "");
  return s;
}

Json to_json(const std::vector<ReadOut>& readout) {
  Json out = Json::array();
  for (const ReadOut& r : readout) {
    Json e{{"scale", r.scale}, {"in_range", r.in_range}};
    if (r.value) e["value"] = *r.value;
    out.push_back(std::move(e));
  }
  return out;
}

Json to_json(const AccuracyReport& r) {
  return Json{{"feasible", r.feasible},
              {"binding_end", to_string(r.binding_end)},
              {"required_u", number_or_null(r.required_u)},
              {"resolvable_x_bound",
               r.resolvable_x_bound ? number_or_null(*r.resolvable_x_bound) : Json(nullptr)},
              {"resolvable_range", pair_or_null(r.resolvable_range)}};
}

Json to_json(const AlignmentReport& r) {
  Json witness = nullptr;
  if (r.rational_witness)
    witness = Json{{"p", r.rational_witness->p},
                   {"q", r.rational_witness->q},
                   {"exponent", r.rational_witness->exponent}};
  return Json{{"T", r.T},
              {"aligned_pair_rule", r.aligned_pair_rule},
              {"equivalent", r.equivalent},
              {"rational_witness", witness},
              {"scale2_range", Json::array({r.scale2_range[0], r.scale2_range[1]})}};
}

Json to_json(const TriangleReport& r) {
  return Json{{"a", r.a},
              {"tau1", r.tau1},
              {"tau2", r.tau2},
              {"angle_low", r.angle_low},
              {"angle_high", r.angle_high},
              {"angle_unit", r.angle_unit == AngleUnit::Degrees ? "degrees" : "radians"},
              {"feasible", r.feasible},
              {"b_interval", pair_or_null(r.b_interval)},
              {"c_interval", pair_or_null(r.c_interval)}};
}

Json to_json(const CoincidencePair& p) { return Json{{"x_C", p.x_C}, {"x_R", p.x_R}}; }

Json registry_json(const std::vector<RegistryEntry>& registry) {
  Json out = Json::array();
  for (const RegistryEntry& e : registry) {
    Json params = Json::object();
    switch (e.function.kind()) {
      case FunctionKind::Log:
      case FunctionKind::LogLog: params["base"] = e.function.parameter(); break;
      case FunctionKind::Power: params["alpha"] = e.function.parameter(); break;
      case FunctionKind::Horizon: params["R"] = e.function.parameter(); break;
      case FunctionKind::Equidistant: break;
    }
    Json item{{"name", e.name},
              {"kind", to_string(e.function.kind())},
              {"params", params},
              {"description", e.description},
              {"units_label", e.units_label},
              {"zoom", e.zoom}};
    if (e.companion_of) {
      item["companion_of"] = *e.companion_of;
      item["companion_factor"] = e.companion_factor;
    } else {
      item["x_min"] = e.x_min;
      item["x_max"] = e.x_max;
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace sliderule
