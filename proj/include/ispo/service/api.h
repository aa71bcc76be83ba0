#ifndef ISPO_SERVICE_API_H_
#define ISPO_SERVICE_API_H_

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "ispo/core/error.h"
#include "ispo/linking/linker.h"
#include "ispo/service/store.h"

namespace ispo::service {

struct ApiRequest {
  std::string method;  // GET, POST, PATCH, DELETE
  std::string path;    // without the query string
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

// HTTP status used for an error payload {"error": name, "message": text}.
int HttpStatusFor(ErrorCode code);

struct ServiceOptions {
  linking::RuleSet rules;
  linking::LinkOptions link;
  // Timestamp stamped on audit events; defaults to UTC wall-clock ISO 8601.
  std::function<std::string()> clock;
};

// Transport-independent endpoint table over a Store. Handle is safe to call
// from many threads at once.
class ApiRouter {
 public:
  ApiRouter(Store &store, ServiceOptions options);
  ApiResponse Handle(const ApiRequest &request) const;

 private:
  Store &store_;
  ServiceOptions options_;
  std::unique_ptr<linking::CandidateGenerator> generator_;
};

// Wraps an ApiRouter in an HTTP server.
class HttpServer {
 public:
  explicit HttpServer(const ApiRouter &router);
  ~HttpServer();

  // Binds host:port (port 0 picks a free one) and returns the bound port.
  // Throws AddressInUse.
  int Bind(const std::string &host, int port);
  // Serves until Stop is called. Bind first.
  void Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string UtcNow();

}  // namespace ispo::service

#endif  // ISPO_SERVICE_API_H_
