#include <sliderule/cli.hpp>

#include <sliderule/api.hpp>
#include <sliderule/errors.hpp>
#include <sliderule/json_io.hpp>
#include <sliderule/service.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sliderule {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(fmt::format("{}: cannot open file", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(fmt::format("{}: cannot write file", path));
  out << text;
  if (!out) throw InvalidInput(fmt::format("{}: write failed", path));
}

struct RenderArgs {
  std::string layout;
  std::string out;
  std::string ticks;
  std::optional<double> offset;
  std::optional<double> hairline;
  std::optional<double> h;
};

struct AnalyzeArgs {
  std::string kind;
  std::vector<std::string> scales;
  std::optional<double> h;
  std::optional<double> separation_factor;
  std::optional<double> a;
  std::optional<double> x_lo;
  std::optional<double> x_hi;
  std::optional<double> xc;
  std::optional<double> xr;
  std::optional<long> rational_bound;
  std::optional<double> min_gap;
  bool radians = false;
};

struct ServeArgs {
  int port = 8080;
  std::string host = "127.0.0.1";
};

void warn_gap_vs_h(double min_gap, double h, std::ostream& err) {
  if (min_gap > h)
    err << fmt::format(
        "warning: tick min_gap_mm ({}) exceeds the legibility bound h ({}); ticks will be "
        "sparser than the readable resolution\n",
        min_gap, h);
}

int cmd_render(const RenderArgs& args, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(args.layout);
  Json body = parse_json_text(text, args.layout);
  if (!body.is_object()) throw InvalidInput(fmt::format("{}: layout must be an object", args.layout));
  if (args.hairline || args.offset)
    body["state"] = Json{{"slide_offset_mm", args.offset.value_or(0.0)},
                         {"hairline_mm", args.hairline.value_or(0.0)}};
  Json result;
  try {
    result = rule_response(body);
  } catch (const InvalidInput& e) {
    throw InvalidInput(anchor_message(e.what(), text, args.layout));
  }
  if (args.h) warn_gap_vs_h(result["layout"]["policy"]["min_gap_mm"].get<double>(), *args.h, err);
  for (const Json& ts : result["tick_sets"])
    for (const Json& w : ts["warnings"])
      err << fmt::format("warning: scale {}: {}\n", ts["scale_name"].get<std::string>(),
                         w.get<std::string>());

  const std::string svg = result["svg"].get<std::string>();
  if (args.out == "-")
    out << svg;
  else
    write_file(args.out, svg);
  if (!args.ticks.empty()) write_file(args.ticks, serialize(result["tick_sets"]));
  return kExitOk;
}

struct ScaleFile {
  std::string path;
  std::string text;
};

Json analyze_request(const AnalyzeArgs& args, AnalysisKind kind, std::vector<ScaleFile>& files) {
  for (const std::string& path : args.scales) files.push_back({path, read_file(path)});
  const auto load = [&](std::size_t i) { return parse_json_text(files[i].text, files[i].path); };
  Json req = Json::object();
  if (kind == AnalysisKind::Alignment) {
    if (files.size() != 2) throw InvalidInput("alignment needs exactly two --scale files");
    req["scale1"] = load(0);
    req["scale2"] = load(1);
  } else if (files.size() == 1) {
    req["scale"] = load(0);
  } else if (files.size() > 1) {
    throw InvalidInput(fmt::format("{} takes at most one --scale file", to_string(kind)));
  }
  if (args.h) req["h"] = *args.h;
  if (args.separation_factor) req["separation_factor"] = *args.separation_factor;
  if (args.a) req["a"] = *args.a;
  if (args.x_lo) req["x_lo"] = *args.x_lo;
  if (args.x_hi) req["x_hi"] = *args.x_hi;
  if (args.xc) req["x_C"] = *args.xc;
  if (args.xr) req["x_R"] = *args.xr;
  if (args.rational_bound) req["rational_bound"] = *args.rational_bound;
  if (args.radians) req["radians"] = true;
  return req;
}

// Errors inside a scale document point back at its file.
std::string anchor_scale_error(std::string_view message, const std::vector<ScaleFile>& files) {
  const auto try_prefix = [&](std::string_view prefix, std::size_t i) -> std::optional<std::string> {
    if (i >= files.size()) return std::nullopt;
    if (!message.starts_with(prefix)) return std::nullopt;
    const char next = message.size() > prefix.size() ? message[prefix.size()] : '\0';
    if (next != '/' && next != ':') return std::nullopt;
    return anchor_message(message, files[i].text, files[i].path, prefix);
  };
  if (auto m = try_prefix("/scale1", 0)) return *m;
  if (auto m = try_prefix("/scale2", 1)) return *m;
  if (auto m = try_prefix("/scale", 0)) return *m;
  return std::string(message);
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  const AnalysisKind kind = analysis_kind_from_string(args.kind);
  std::vector<ScaleFile> files;
  const Json req = analyze_request(args, kind, files);
  if (args.min_gap) warn_gap_vs_h(*args.min_gap, args.h.value_or(AccuracyParams{}.h), err);
  Json report;
  try {
    report = analyze(kind, req);
  } catch (const InvalidInput& e) {
    throw InvalidInput(anchor_scale_error(e.what(), files));
  }
  out << serialize(report);
  return kExitOk;
}

int cmd_serve(const ServeArgs& args, std::ostream& err) {
  Server server;
  err << fmt::format("listening on http://{}:{}\n", args.host, args.port);
  err.flush();
  if (!server.listen(args.host, args.port)) {
    err << fmt::format("error: cannot listen on {}:{}\n", args.host, args.port);
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slide-rule scale construction and analysis", "sliderule"};
  // -h would clash with --h (the legibility bound), so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render a rule layout to SVG");
  render_cmd->add_option("--layout", render.layout, "RuleLayout JSON file")->required();
  render_cmd->add_option("--out", render.out, "SVG output file ('-' for stdout)")->required();
  render_cmd->add_option("--ticks", render.ticks, "Also write the tick sets as JSON");
  render_cmd->add_option("--offset", render.offset, "Slide offset in mm");
  render_cmd->add_option("--hairline", render.hairline, "Hairline position in mm");
  render_cmd->add_option("--h", render.h, "Legibility bound h in mm, for a consistency check");

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run a scale analysis, JSON report on stdout");
  analyze_cmd->add_option("--kind", analyze_args.kind, "accuracy|alignment|triangle|coincidence")
      ->required();
  analyze_cmd->add_option("--scale", analyze_args.scales, "ScaleSpec JSON file (twice for alignment)");
  analyze_cmd->add_option("--h", analyze_args.h, "Minimal distinguishable separation in mm");
  analyze_cmd->add_option("--separation-factor", analyze_args.separation_factor,
                          "Neighbour factor of the legibility criterion (default 1.01)");
  analyze_cmd->add_option("--a", analyze_args.a, "Known triangle leg");
  analyze_cmd->add_option("--x-lo", analyze_args.x_lo, "Triangle range lower end (without --scale)");
  analyze_cmd->add_option("--x-hi", analyze_args.x_hi, "Triangle range upper end (without --scale)");
  analyze_cmd->add_option("--xc", analyze_args.xc, "Coincidence: value on C");
  analyze_cmd->add_option("--xr", analyze_args.xr, "Coincidence: value on R");
  analyze_cmd->add_option("--rational-bound", analyze_args.rational_bound,
                          "Largest numerator/denominator of an easy rational T");
  analyze_cmd->add_option("--min-gap", analyze_args.min_gap,
                          "Tick min gap in mm, checked against h");
  analyze_cmd->add_flag("--radians", analyze_args.radians, "Report triangle angles in radians");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Start the JSON-over-HTTP service");
  serve_cmd->add_option("--port", serve.port, "TCP port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", serve.host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*render_cmd) return cmd_render(render, out, err);
    if (*analyze_cmd) return cmd_analyze(analyze_args, out, err);
    if (*serve_cmd) return cmd_serve(serve, err);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << '\n';
    return kExitAnalysisError;
  }
  return kExitInputError;
}

}  // namespace sliderule
