#include <sliderule/api.hpp>
#include <sliderule/errors.hpp>
#include <sliderule/json_io.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace sliderule;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseJson, SyntaxErrorsCarryLineAndColumn) {
  const std::string text = "{\n  \"a\": 1,\n  \"b\": [1, 2,\n}\n";
  const std::string msg = error_of([&] { parse_json_text(text, "doc.json"); });
  EXPECT_EQ(msg.rfind("doc.json:4:1: ", 0), 0u) << msg;
}

TEST(LocatePointer, FindsMembersAndElements) {
  const std::string text = "{\n  \"rows\": [\n    {\"x\": 1},\n    {\"y\": 2}\n  ]\n}\n";
  auto p = locate_json_pointer(text, "/rows/1");
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->first, 4u);
  EXPECT_EQ(p->second, 5u);
  p = locate_json_pointer(text, "/rows/1/y");
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->first, 4u);
  // Missing member falls back to its parent.
  p = locate_json_pointer(text, "/rows/0/missing");
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->first, 3u);
  EXPECT_FALSE(locate_json_pointer("{", "/a").has_value());
}

TEST(AnchorMessage, PrefixesSourcePosition) {
  const std::string text = "{\n  \"x_min\": -1\n}\n";
  EXPECT_EQ(anchor_message("/x_min: bad", text, "f.json"), "f.json:2:9: /x_min: bad");
  EXPECT_EQ(anchor_message("plain", text, "f.json"), "f.json: plain");
}

TEST(ScaleJson, ParsesEveryKind) {
  const Json doc = Json::parse(R"([
    {"name": "a", "kind": "log", "length_mm": 250, "x_min": 1, "x_max": 10},
    {"name": "b", "kind": "log", "params": {"base": 2}, "length_mm": 250, "x_min": 1, "x_max": 8},
    {"name": "c", "kind": "power", "params": {"alpha": -1}, "length_mm": 250, "unit": 250, "x_max": 10},
    {"name": "d", "kind": "horizon", "params": {"R": 6371}, "length_mm": 250, "x_min": 0, "x_max": 1},
    {"name": "e", "kind": "horizon", "units_label": "m", "length_mm": 250, "x_min": 0, "x_max": 100},
    {"name": "f", "kind": "loglog", "length_mm": 250, "x_min": 2.8, "x_max": 20000},
    {"name": "g", "kind": "equidistant", "length_mm": 250, "x_min": 0, "x_max": 1,
     "orientation": "right_to_left", "zoom": 0.5}
  ])");
  std::vector<ScaleSpec> s;
  for (const auto& j : doc) s.push_back(scale_from_json(j, ParseContext{6371.0, std::nullopt}));
  EXPECT_EQ(s[1].function().parameter(), 2.0);
  EXPECT_NEAR(s[2].x_min(), 1.0, 1e-12);
  EXPECT_EQ(s[4].function().parameter(), 6371000.0);
  EXPECT_EQ(s[6].orientation(), Orientation::RightToLeft);
  EXPECT_EQ(s[6].zoom(), 0.5);
}

TEST(ScaleJson, RoundTrip) {
  const Json j = Json::parse(
      R"({"name": "Q", "kind": "power", "params": {"alpha": 2}, "length_mm": 250, "x_min": 0, "x_max": 100})");
  const auto s = scale_from_json(j);
  const auto again = scale_from_json(to_json(s));
  EXPECT_EQ(again.function(), s.function());
  EXPECT_EQ(again.unit(), s.unit());
  EXPECT_EQ(to_json(again), to_json(s));
}

TEST(ScaleJson, ErrorsNameTheField) {
  const auto bad = [](const char* text) {
    return error_of([&] { scale_from_json(Json::parse(text), {}, "/scale"); });
  };
  EXPECT_EQ(bad(R"({"name": "x", "kind": "log", "length_mm": 250, "x_min": 1, "x_max": 10, "foo": 1})"),
            "/scale/foo: unknown field");
  EXPECT_EQ(bad(R"({"name": "x", "kind": "log", "x_min": 1, "x_max": 10})"),
            "/scale/length_mm: required number is missing");
  EXPECT_EQ(bad(R"({"name": "x", "kind": "sine", "length_mm": 250, "x_min": 1, "x_max": 10})")
                .rfind("/scale", 0),
            0u);
  EXPECT_EQ(bad(R"({"name": "x", "kind": "power", "length_mm": 250, "x_min": 1, "x_max": 10})"),
            "/scale/params/alpha: required number is missing");
  EXPECT_EQ(bad(R"({"name": "x", "kind": "log", "length_mm": "long", "x_min": 1, "x_max": 10})"),
            "/scale/length_mm: expected a number");
  EXPECT_NE(bad(R"({"name": "x", "kind": "log", "length_mm": 250, "x_min": 0, "x_max": 10})")
                .find("x_min"),
            std::string::npos);
  EXPECT_EQ(bad(R"([1, 2])"), "/scale: scale must be an object");
  EXPECT_NE(bad(R"("C")").find("layout length"), std::string::npos);
}

TEST(LayoutJson, RegistryNamesAndInlineScales) {
  const Json j = Json::parse(slurp(SLIDERULE_DATA_DIR "/layouts/quadratic.json"));
  const auto l = layout_from_json(j);
  ASSERT_EQ(l.rows().size(), 3u);
  EXPECT_EQ(l.rows()[2].scale.name(), "Q");
  EXPECT_EQ(l.rows()[2].scale.length_mm(), 250.0);
}

TEST(LayoutJson, Errors) {
  EXPECT_EQ(error_of([] { layout_from_json(Json::parse(R"({"length_mm": 250, "slide": "C"})")); }),
            "/slide: expected an array");
  EXPECT_EQ(
      error_of([] { layout_from_json(Json::parse(R"({"length_mm": 250, "slide": ["NOPE"]})")); })
          .rfind("/slide/0: ", 0),
      0u);
  EXPECT_EQ(error_of([] {
              layout_from_json(Json::parse(R"({"length_mm": 250, "slide": ["C"], "extra": 1})"));
            }),
            "/extra: unknown field");
  EXPECT_EQ(error_of([] {
              layout_from_json(
                  Json::parse(R"({"length_mm": 250, "slide": ["C"], "policy": {"min_gap_mm": -1}})"));
            }),
            "/policy: min_gap_mm must be positive, got -1");
}

TEST(PolicyJson, RoundTrip) {
  TickPolicy p;
  p.min_gap_mm = 1.0;
  p.special_values = {3.14};
  const auto again = policy_from_json(to_json(p));
  EXPECT_EQ(again.min_gap_mm, 1.0);
  EXPECT_EQ(again.special_values, p.special_values);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"max_levels": 2.5})")), InvalidInput);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"special_values": ["pi"]})")), InvalidInput);
}

TEST(ReportJson, FieldNames) {
  AccuracyReport a;
  a.feasible = true;
  a.binding_end = RangeEnd::XMin;
  a.required_u = 0.025;
  a.resolvable_x_bound = 31.5;
  const Json ja = to_json(a);
  for (const char* k : {"feasible", "binding_end", "required_u", "resolvable_x_bound"})
    EXPECT_TRUE(ja.contains(k)) << k;
  EXPECT_EQ(ja["binding_end"], "x_min");

  const Json jt = to_json(triangle_range(40.0, 31.54, 100.0));
  for (const char* k : {"a", "tau1", "tau2", "angle_low", "angle_high", "b_interval", "c_interval"})
    EXPECT_TRUE(jt.contains(k)) << k;

  AlignmentReport r;
  r.T = 2.0;
  r.equivalent = true;
  r.rational_witness = RationalWitness{2, 1, 0};
  const Json jr = to_json(r);
  for (const char* k : {"T", "aligned_pair_rule", "equivalent", "rational_witness"})
    EXPECT_TRUE(jr.contains(k)) << k;

  const Json jc = to_json(coincidence_from_C(4.0));
  EXPECT_TRUE(jc.contains("x_C"));
  EXPECT_TRUE(jc.contains("x_R"));
}

TEST(Api, AnalyzeDispatch) {
  const Json q = Json::parse(slurp(SLIDERULE_DATA_DIR "/scales/quadratic.json"));
  const Json acc = analyze(AnalysisKind::Accuracy, Json{{"scale", q}, {"h", 0.5}});
  EXPECT_NEAR(acc["resolvable_x_bound"].get<double>(), 31.544, 1e-3);
  const Json tri = analyze(AnalysisKind::Triangle, Json{{"a", 40}, {"scale", q}});
  EXPECT_NEAR(tri["tau1"].get<double>(), 0.7886, 5e-4);
  const Json tri2 = analyze(AnalysisKind::Triangle, Json{{"a", 40}, {"x_lo", 31.54}, {"x_hi", 100}});
  EXPECT_NEAR(tri2["tau2"].get<double>(), 2.291, 2e-3);
  const Json table = analyze(AnalysisKind::Coincidence, Json::object());
  ASSERT_EQ(table["pairs"].size(), 4u);
  EXPECT_NEAR(table["pairs"][1]["x_R"].get<double>(), 1.661, 5e-3);
  const Json from_r = analyze(AnalysisKind::Coincidence, Json{{"x_R", 1.0}});
  EXPECT_NEAR(from_r["x_C"].get<double>(), 10.0, 1e-12);
}

TEST(Api, RequestErrors) {
  const Json q = Json::parse(slurp(SLIDERULE_DATA_DIR "/scales/quadratic.json"));
  EXPECT_THROW(analyze(AnalysisKind::Accuracy, Json::object()), InvalidInput);
  EXPECT_THROW(analyze(AnalysisKind::Accuracy, Json{{"scale", q}, {"bogus", 1}}), InvalidInput);
  EXPECT_THROW(analyze(AnalysisKind::Accuracy, Json::array()), InvalidInput);
  EXPECT_THROW(analyze(AnalysisKind::Coincidence, Json{{"x_C", 4}, {"x_R", 1}}), InvalidInput);
  EXPECT_THROW(analyze(AnalysisKind::Coincidence, Json{{"x_C", 0.5}}), DomainError);
  EXPECT_THROW(analyze(AnalysisKind::Triangle, Json{{"a", 5}, {"scale", q}}), RangeError);
  EXPECT_THROW(analyze(AnalysisKind::Alignment,
                       Json{{"scale1", q}, {"scale2", Json::parse(slurp(SLIDERULE_DATA_DIR
                                                                        "/scales/reciprocal.json"))}}),
               IncompatibleScales);
  EXPECT_THROW(analysis_kind_from_string("speed"), InvalidInput);
}

TEST(Api, RuleAndRead) {
  const Json layout = Json::parse(slurp(SLIDERULE_DATA_DIR "/layouts/c_over_d.json"));
  const Json rule = rule_response(layout);
  EXPECT_TRUE(rule.contains("svg"));
  EXPECT_EQ(rule["tick_sets"].size(), 5u);
  EXPECT_EQ(rule["layout"]["rows"].size(), 5u);
  Json with_state = layout;
  with_state["state"] = Json{{"slide_offset_mm", 0}, {"hairline_mm", 10}};
  EXPECT_NE(rule_response(with_state)["svg"].get<std::string>().find("hairline"), std::string::npos);

  const Json read = read_response(Json{{"layout", layout}, {"slide_offset_mm", 0.0},
                                       {"hairline_mm", 250.0 * std::log10(2.0)}});
  bool saw_d = false;
  for (const auto& r : read) {
    if (r["scale"] == "D") {
      EXPECT_NEAR(r["value"].get<double>(), 2.0, 1e-12);
      EXPECT_TRUE(r["in_range"].get<bool>());
      saw_d = true;
    }
  }
  EXPECT_TRUE(saw_d);
  EXPECT_THROW(read_response(Json{{"layout", layout}}), InvalidInput);
}

TEST(Api, SerializeIsStable) {
  const Json doc = analyze(AnalysisKind::Coincidence, Json{{"x_C", 4.0}});
  EXPECT_EQ(serialize(doc), serialize(Json::parse(serialize(doc))));
  EXPECT_EQ(serialize(doc).back(), '\n');
}
