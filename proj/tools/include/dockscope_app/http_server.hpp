// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <thread>

#include "dockscope/service/service.hpp"

namespace dockscope::app {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::size_t worker_threads = 4;
  std::size_t max_upload_bytes = std::size_t{512} << 20;
};

/// HTTP/1.1 front end forwarding every request to a Service.
class HttpServer {
 public:
  HttpServer(service::Service& service, ServerOptions options);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; returns the bound port. Throws Error(io) on failure.
  int bind();
  /// Serves until stop(); bind() must have succeeded.
  void serve();
  /// bind() plus serve() on a background thread.
  int start();
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
  std::thread thread_;
};

/// "host:port" or ":port" or "port".
ServerOptions parse_listen_address(const std::string& text, ServerOptions base = {});

}  // namespace dockscope::app
