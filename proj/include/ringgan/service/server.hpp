#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "ringgan/geometry/ring.hpp"
#include "ringgan/service/store.hpp"

namespace ringgan::service {

struct ServiceOptions {
  std::filesystem::path data_dir = "ringgan-data";
  /// Default checkpoint, addressed by its file name in render requests.
  std::optional<std::filesystem::path> checkpoint;
  /// Further checkpoints that render requests may name; defaults to
  /// data_dir/checkpoints.
  std::optional<std::filesystem::path> checkpoint_dir;
  std::string host = "127.0.0.1";
  /// 0 binds an ephemeral port.
  int port = 8080;
  int image_size = 64;
  std::string cors_origin = "*";
  /// Seeds the source of ring seeds for requests that omit one; random when unset.
  std::optional<std::uint64_t> seed;
};

/// Parses a partial RingSpec body over the defaults. Every bad key and every
/// violated bound is reported; an empty list means `spec` is valid.
std::vector<geometry::FieldError> parse_ring_request(const nlohmann::json& body, geometry::RingSpec& spec);

/// HTTP/JSON facade over a RingStore and a frozen sketch-to-render model.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();
  int port() const;

  RingStore& store();
  const ServiceOptions& options() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ringgan::service
