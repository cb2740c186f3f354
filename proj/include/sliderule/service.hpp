#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace sliderule {

struct ServiceConfig {
  std::optional<double> radius_km;
  std::string cors_origin = "*";
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Stateless request -> response mapping behind the HTTP server:
///   GET  /registry
///   POST /rule
///   POST /read
///   POST /analyze/{accuracy|alignment|triangle|coincidence}
/// Errors are {code, message, detail} with 400 for bad requests, 422 for
/// analysis domain/range/compatibility failures; unknown routes answer 404 and
/// wrong methods 405, still with code bad_request.
ServiceResponse handle_request(std::string_view method, std::string_view path,
                               std::string_view body, const ServiceConfig& config = {});

/// HTTP/1.1 server wrapping handle_request.
class Server {
 public:
  explicit Server(ServiceConfig config = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and serves until stop(); returns false when binding fails.
  bool listen(const std::string& host, int port);
  /// Binds to a free port and returns it (or -1); serve with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sliderule
