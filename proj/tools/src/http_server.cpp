// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope_app/http_server.hpp"

#include <charconv>

#include <httplib.h>

#include "dockscope/error.hpp"

namespace dockscope::app {

struct HttpServer::Impl {
  service::Service& service;
  ServerOptions options;
  httplib::Server server;

  Impl(service::Service& s, ServerOptions o) : service(s), options(std::move(o)) {}
};

HttpServer::HttpServer(service::Service& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  auto& svr = impl_->server;
  const std::size_t threads = std::max<std::size_t>(1, impl_->options.worker_threads);
  svr.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  svr.set_payload_max_length(impl_->options.max_upload_bytes);

  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    service::Request r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    r.body = req.body;
    const auto out = impl_->service.handle(r);
    res.status = out.status;
    for (const auto& [k, v] : out.headers) res.set_header(k, v);
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(out.body, out.content_type);
  };
  svr.Get(".*", forward);
  svr.Post(".*", forward);
  svr.Patch(".*", forward);
  svr.Delete(".*", forward);
  svr.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PATCH, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& o = impl_->options;
  if (o.port == 0) {
    port_ = impl_->server.bind_to_any_port(o.host);
    if (port_ <= 0) fail(ErrorCode::io, "cannot bind to " + o.host);
  } else {
    if (!impl_->server.bind_to_port(o.host, o.port))
      fail(ErrorCode::io, "cannot bind to " + o.host + ":" + std::to_string(o.port));
    port_ = o.port;
  }
  return port_;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

int HttpServer::start() {
  const int port = bind();
  thread_ = std::thread([this] { serve(); });
  impl_->server.wait_until_ready();
  return port;
}

void HttpServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

ServerOptions parse_listen_address(const std::string& text, ServerOptions base) {
  std::string host = base.host, port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  int port = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535)
    fail(ErrorCode::invalid_argument, "malformed listen address '" + text + "'");
  base.host = host;
  base.port = port;
  return base;
}

}  // namespace dockscope::app
