#include <sliderule/api.hpp>
#include <sliderule/cli.hpp>
#include <sliderule/service.hpp>

#include <gtest/gtest.h>
#include <httplib.h>

#include <fstream>
#include <sstream>
#include <thread>

using namespace sliderule;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& rel) { return std::string(SLIDERULE_DATA_DIR) + "/" + rel; }

std::string cli_out(std::vector<std::string> args) {
  args.insert(args.begin(), "sliderule");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  EXPECT_EQ(run_cli(static_cast<int>(argv.size()), argv.data(), out, err), 0) << err.str();
  return out.str();
}

class LiveServer : public ::testing::Test {
 protected:
  void SetUp() override {
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  Server server_;
  int port_ = -1;
  std::thread thread_;
};

}  // namespace

TEST(Handle, Registry) {
  const auto r = handle_request("GET", "/registry", "");
  EXPECT_EQ(r.status, 200);
  const Json j = Json::parse(r.body);
  ASSERT_EQ(j.size(), 16u);
  EXPECT_EQ(j[0]["name"], "C");
  EXPECT_EQ(handle_request("POST", "/registry", "").status, 405);
}

TEST(Handle, Routing) {
  EXPECT_EQ(handle_request("GET", "/nowhere", "").status, 404);
  EXPECT_EQ(handle_request("POST", "/analyze/speed", "{}").status, 404);
  EXPECT_EQ(handle_request("GET", "/rule", "").status, 405);
}

TEST(Handle, ErrorsMapToStatus) {
  auto r = handle_request("POST", "/analyze/coincidence", "{not json");
  EXPECT_EQ(r.status, 400);
  Json j = Json::parse(r.body);
  EXPECT_EQ(j["code"], "bad_request");
  EXPECT_EQ(j["detail"], "/analyze/coincidence");
  EXPECT_NE(j["message"].get<std::string>().find("body:1:"), std::string::npos);

  r = handle_request("POST", "/analyze/coincidence", R"({"x_C": 0.5})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(Json::parse(r.body)["code"], "domain_error");

  r = handle_request("POST", "/analyze/triangle", R"({"a": 5, "x_lo": 10, "x_hi": 20})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(Json::parse(r.body)["code"], "range_error");

  const std::string q = slurp(data("scales/quadratic.json"));
  const std::string rcp = slurp(data("scales/reciprocal.json"));
  r = handle_request("POST", "/analyze/alignment", R"({"scale1": )" + q + R"(, "scale2": )" + rcp + "}");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(Json::parse(r.body)["code"], "incompatible_scales");

  r = handle_request("POST", "/rule", R"({"length_mm": 250})");
  EXPECT_EQ(r.status, 400);
  r = handle_request("POST", "/read", R"({"layout": {"length_mm": 250, "slide": ["C"]}, "hairline_mm": 999})");
  EXPECT_EQ(r.status, 400);
}

TEST(Handle, RuleAndRead) {
  const std::string layout = slurp(data("layouts/c_r_coincidence.json"));
  const auto rule = handle_request("POST", "/rule", layout);
  ASSERT_EQ(rule.status, 200) << rule.body;
  const Json j = Json::parse(rule.body);
  EXPECT_FALSE(j["svg"].get<std::string>().empty());
  EXPECT_EQ(j["tick_sets"][0]["origin_label"]["label"], "∞");

  // Hairline over C:4 reads R close to 1.661.
  const double pos = 250.0 * std::log10(4.0);
  const auto read = handle_request(
      "POST", "/read",
      R"({"layout": )" + layout + R"(, "slide_offset_mm": 0, "hairline_mm": )" + std::to_string(pos) + "}");
  ASSERT_EQ(read.status, 200) << read.body;
  for (const auto& r : Json::parse(read.body))
    if (r["scale"] == "R") EXPECT_NEAR(r["value"].get<double>(), 1.661, 0.005);
}

TEST(Handle, RadiusOverride) {
  ServiceConfig cfg;
  cfg.radius_km = 1000.0;
  const Json j = Json::parse(handle_request("GET", "/registry", "", cfg).body);
  for (const auto& e : j)
    if (e["name"] == "G4") EXPECT_EQ(e["params"]["R"], 1e6);
}

// CLI output and service body agree byte for byte for every analysis kind.
TEST(Parity, CliMatchesHandler) {
  const std::string q = slurp(data("scales/quadratic.json"));
  const std::string q2 = slurp(data("scales/quadratic_half.json"));
  struct Case {
    std::vector<std::string> args;
    std::string path;
    std::string body;
  };
  const std::vector<Case> cases{
      {{"analyze", "--kind", "accuracy", "--scale", data("scales/quadratic.json"), "--h", "0.5"},
       "/analyze/accuracy", R"({"scale": )" + q + R"(, "h": 0.5})"},
      {{"analyze", "--kind", "alignment", "--scale", data("scales/quadratic.json"), "--scale",
        data("scales/quadratic_half.json")},
       "/analyze/alignment", R"({"scale1": )" + q + R"(, "scale2": )" + q2 + "}"},
      {{"analyze", "--kind", "triangle", "--scale", data("scales/quadratic.json"), "--a", "40"},
       "/analyze/triangle", R"({"a": 40, "scale": )" + q + "}"},
      {{"analyze", "--kind", "coincidence", "--xc", "4.976"}, "/analyze/coincidence",
       R"({"x_C": 4.976})"},
      {{"analyze", "--kind", "coincidence"}, "/analyze/coincidence", "{}"},
  };
  for (const auto& c : cases) {
    const auto resp = handle_request("POST", c.path, c.body);
    ASSERT_EQ(resp.status, 200) << resp.body;
    EXPECT_EQ(cli_out(c.args), resp.body) << c.path;
  }
}

TEST_F(LiveServer, EndToEnd) {
  auto cli = client();
  auto reg = cli.Get("/registry");
  ASSERT_TRUE(reg);
  EXPECT_EQ(reg->status, 200);
  EXPECT_EQ(reg->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(reg->body, handle_request("GET", "/registry", "").body);

  auto acc = cli.Post("/analyze/accuracy",
                      R"({"scale": )" + slurp(data("scales/quadratic.json")) + R"(, "h": 0.5})",
                      "application/json");
  ASSERT_TRUE(acc);
  EXPECT_EQ(acc->status, 200);
  EXPECT_EQ(acc->body, cli_out({"analyze", "--kind", "accuracy", "--scale",
                                data("scales/quadratic.json"), "--h", "0.5"}));

  auto bad = cli.Post("/analyze/coincidence", R"({"x_C": -1})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 422);
  EXPECT_EQ(Json::parse(bad->body)["code"], "domain_error");

  auto missing = cli.Get("/nothing");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(Json::parse(missing->body)["code"], "bad_request");

  auto wrong_method = cli.Get("/rule");
  ASSERT_TRUE(wrong_method);
  EXPECT_EQ(wrong_method->status, 405);

  auto preflight = cli.Options("/rule");
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);
  EXPECT_NE(preflight->get_header_value("Access-Control-Allow-Methods").find("POST"),
            std::string::npos);

  auto rule = cli.Post("/rule", slurp(data("layouts/sample.json")), "application/json");
  ASSERT_TRUE(rule);
  EXPECT_EQ(rule->status, 200);
  EXPECT_FALSE(Json::parse(rule->body)["svg"].get<std::string>().empty());
}
