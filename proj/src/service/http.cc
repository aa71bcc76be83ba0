#include <cctype>

#include "httplib.h"
#include "ispo/service/api.h"

namespace ispo::service {

struct HttpServer::Impl {
  const ApiRouter &router;
  httplib::Server server;
  bool bound = false;

  explicit Impl(const ApiRouter &r) : router(r) {}

  void Dispatch(const httplib::Request &req, httplib::Response &res) {
    ApiRequest api;
    api.method = req.method;
    api.path = req.path;
    for (const auto &[k, v] : req.params) api.query.emplace(k, v);
    for (const auto &[k, v] : req.headers) {
      std::string name = k;
      for (char &c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      api.headers.emplace(std::move(name), v);
    }
    api.body = req.body;
    ApiResponse out = router.Handle(api);
    res.status = out.status;
    for (const auto &[k, v] : out.headers) res.set_header(k, v);
    res.set_content(out.body, out.content_type);
  }
};

HttpServer::HttpServer(const ApiRouter &router)
    : impl_(std::make_unique<Impl>(router)) {
  auto handler = [this](const httplib::Request &req, httplib::Response &res) {
    impl_->Dispatch(req, res);
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Patch(".*", handler);
  impl_->server.Delete(".*", handler);
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string &host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound_port = -1;
  }
  if (bound_port < 0) {
    throw Error(ErrorCode::kAddressInUse, host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound_port;
}

void HttpServer::Run() {
  if (!impl_->bound) throw Error(ErrorCode::kInvalidArgument, "server not bound");
  impl_->server.listen_after_bind();
}

void HttpServer::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace ispo::service
