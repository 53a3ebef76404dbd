// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "dockscope/density.hpp"
#include "dockscope/error.hpp"
#include "dockscope/filter.hpp"
#include "dockscope/selection.hpp"
#include "dockscope/similarity.hpp"

// Transport-independent session API. The HTTP binding in tools/ forwards
// every request to Service::handle; tests call it directly.
namespace dockscope::service {

struct Request {
  std::string method;  // GET, POST, PATCH, DELETE
  std::string path;    // e.g. /sessions/ab12/overview
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

/// Immutable session state. Readers hold a shared_ptr to one snapshot; every
/// mutation publishes a new one with a larger generation.
struct Snapshot {
  std::shared_ptr<const ComplexEnsemble> ensemble;  // null until loaded
  FilterQueue queue;
  VisibilityState visibility;
  Selection selection;
  PropertyColumns extra_columns;  // similarity_to_primary once a primary CC or reference is set
  std::optional<ContactProfile> primary_profile;
  std::uint64_t generation = 0;
};

class Session {
 public:
  explicit Session(std::string id);

  const std::string& id() const { return id_; }
  std::shared_ptr<const Snapshot> snapshot() const;

  /// Runs `mutate` on a copy of the current snapshot while holding the
  /// writer lock and publishes it with the next generation. Nothing is
  /// published if `mutate` throws.
  std::shared_ptr<const Snapshot> update(const std::function<void(Snapshot&)>& mutate);

  /// Density fields are cached per (generation, parameters).
  std::shared_ptr<const DensityResult> density(const Snapshot& snap, ProteinIndex primary, const DensityParams& params);

 private:
  std::string id_;
  std::mutex writer_;
  mutable std::mutex publish_;
  std::shared_ptr<const Snapshot> current_;

  std::mutex cache_mutex_;
  std::string cache_key_;
  std::shared_ptr<const DensityResult> cache_;
};

struct ServiceOptions {
  std::size_t max_upload_bytes = std::size_t{512} << 20;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});

  /// Never throws; failures become JSON error responses
  /// {"code", "message", "detail"}.
  Response handle(const Request& request);

  std::shared_ptr<Session> create_session();
  std::shared_ptr<Session> find_session(const std::string& id) const;
  const ServiceOptions& options() const { return options_; }

 private:
  Response dispatch(const Request& request);

  ServiceOptions options_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// HTTP status for an error code.
int http_status(ErrorCode code);

}  // namespace dockscope::service
