#include "xwacoda/server.hpp"

#include <fstream>
#include <mutex>

#include <httplib.h>

#include "xwacoda/api.hpp"

namespace xwacoda {

namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html>
<head><meta charset="utf-8"><title>xwacoda</title></head>
<body>
<h1>xwacoda</h1>
<p>No explorer assets are installed. The JSON API is available:</p>
<ul>
<li>GET /api/model</li>
<li>POST /api/query</li>
<li>POST /api/cube</li>
<li>POST /api/cube/op</li>
</ul>
</body>
</html>
)";

void send(httplib::Response& res, const api::Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

struct Server::Impl {
  const WarehouseStore& store;
  ServerOptions options;
  httplib::Server http;
  std::mutex log_mutex;
  std::ofstream log;

  Impl(const WarehouseStore& s, ServerOptions o) : store(s), options(std::move(o)) {}
};

Server::Server(const WarehouseStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
  auto& http = impl_->http;
  const WarehouseStore& st = impl_->store;

  http.Get("/api/model", [&st](const httplib::Request&, httplib::Response& res) { send(res, api::model(st)); });
  http.Post("/api/query",
            [&st](const httplib::Request& req, httplib::Response& res) { send(res, api::query(st, req.body)); });
  http.Post("/api/cube",
            [&st](const httplib::Request& req, httplib::Response& res) { send(res, api::cube(st, req.body)); });
  http.Post("/api/cube/op",
            [&st](const httplib::Request& req, httplib::Response& res) { send(res, api::cube_op(st, req.body)); });

  if (impl_->options.assets) {
    http.set_mount_point("/", impl_->options.assets->string());
  } else {
    http.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }

  http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      auto r = api::not_found(req.path);
      res.set_content(r.body, r.content_type);
    }
  });

  if (impl_->options.request_log) {
    impl_->log.open(*impl_->options.request_log, std::ios::app);
    http.set_logger([impl = impl_.get()](const httplib::Request& req, const httplib::Response& res) {
      std::lock_guard lock(impl->log_mutex);
      impl->log << req.method << ' ' << req.path << ' ' << res.status << '\n';
      impl->log.flush();
    });
  }
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::listen() { return impl_->http.listen_after_bind(); }

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace xwacoda
