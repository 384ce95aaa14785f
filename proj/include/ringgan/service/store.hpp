#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringgan/geometry/ring.hpp"

namespace ringgan::service {

struct RingRecord {
  std::string id;
  geometry::RingSpec spec;
  std::string created_at;
  bool has_render = false;
  bool has_mesh = false;
};

void to_json(nlohmann::json& j, const RingRecord& r);
void from_json(const nlohmann::json& j, RingRecord& r);

/// Rings persisted as data_dir/rings/<id>/{record.json, sketch.png,
/// render.png, mesh.stl}. Reads run concurrently; creation and blob writes
/// take the store's exclusive lock.
class RingStore {
 public:
  RingStore(std::filesystem::path data_dir, int image_size);

  /// Generates the ring and its sketch (drawn as for a dataset entry with
  /// ring seed spec.seed), persists both, returns the record.
  RingRecord create(const geometry::RingSpec& spec);

  std::optional<RingRecord> get(const std::string& id) const;
  std::vector<RingRecord> list() const;
  std::size_t size() const;

  std::vector<std::uint8_t> sketch_png(const std::string& id) const;
  /// Binary STL, generated on first request and cached on disk.
  std::vector<std::uint8_t> mesh_stl(const std::string& id);
  std::optional<std::vector<std::uint8_t>> render_png(const std::string& id) const;
  void put_render(const std::string& id, const std::vector<std::uint8_t>& png);

  std::uint64_t mesh_generations() const { return mesh_generations_; }
  std::uint64_t mesh_cache_hits() const { return mesh_cache_hits_; }
  int image_size() const { return image_size_; }

 private:
  std::filesystem::path ring_dir(const std::string& id) const;
  std::string fresh_id();
  void write_record(const RingRecord& record);

  std::filesystem::path root_;
  int image_size_;
  mutable std::shared_mutex mutex_;
  std::mutex mesh_mutex_;
  std::map<std::string, RingRecord> records_;
  std::atomic<std::uint64_t> mesh_generations_{0};
  std::atomic<std::uint64_t> mesh_cache_hits_{0};
  std::uint64_t id_state_;
};

/// Writes via a sibling temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace ringgan::service
