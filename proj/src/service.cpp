#include <sliderule/service.hpp>

#include <sliderule/api.hpp>
#include <sliderule/errors.hpp>
#include <sliderule/json_io.hpp>

#include <httplib.h>

#include <optional>

namespace sliderule {

namespace {

ServiceResponse error_response(int status, std::string_view code, std::string_view message,
                               std::string_view detail) {
  const Json body{{"code", code}, {"message", message}, {"detail", detail}};
  return {status, serialize(body)};
}

}  // namespace

ServiceResponse handle_request(std::string_view method, std::string_view path,
                               std::string_view body, const ServiceConfig& config) {
  const ParseContext ctx{.radius_km = config.radius_km, .default_length_mm = std::nullopt};
  constexpr std::string_view kAnalyze = "/analyze/";
  try {
    if (path == "/registry") {
      if (method != "GET") return error_response(405, "bad_request", "use GET", path);
      return {200, serialize(registry_json(scale_registry(config.radius_km)))};
    }
    const bool known = path == "/rule" || path == "/read" || path.starts_with(kAnalyze);
    if (!known) return error_response(404, "bad_request", "no such endpoint", path);
    if (method != "POST") return error_response(405, "bad_request", "use POST", path);

    std::optional<AnalysisKind> kind;
    if (path.starts_with(kAnalyze)) {
      try {
        kind = analysis_kind_from_string(path.substr(kAnalyze.size()));
      } catch (const InvalidInput& e) {
        return error_response(404, "bad_request", e.what(), path);
      }
    }
    const Json request = parse_json_text(body, "body");
    if (path == "/rule") return {200, serialize(rule_response(request, ctx))};
    if (path == "/read") return {200, serialize(read_response(request, ctx))};
    return {200, serialize(analyze(*kind, request, ctx))};
  } catch (const InvalidInput& e) {
    return error_response(400, e.code(), e.what(), path);
  } catch (const Error& e) {
    return error_response(422, e.code(), e.what(), path);
  } catch (const std::exception& e) {
    return error_response(400, "bad_request", e.what(), path);
  }
}

struct Server::Impl {
  ServiceConfig config;
  httplib::Server http;
};

Server::Server(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  auto& http = impl_->http;
  const auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    const ServiceResponse r = handle_request(req.method, req.path, req.body, impl_->config);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  http.set_default_headers({{"Access-Control-Allow-Origin", impl_->config.cors_origin},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                            {"Access-Control-Allow-Headers", "Content-Type"}});
  http.Get("/registry", dispatch);
  http.Post("/rule", dispatch);
  http.Post("/read", dispatch);
  http.Post(R"(/analyze/([a-z]+))", dispatch);
  http.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  http.set_error_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const ServiceResponse r = handle_request(req.method, req.path, req.body, impl_->config);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
}

Server::~Server() { stop(); }

bool Server::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }

int Server::bind_to_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }

bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace sliderule
