#include "ringgan/service/store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>

#include "ringgan/data/dataset.hpp"
#include "ringgan/error.hpp"
#include "ringgan/geometry/mesh.hpp"
#include "ringgan/geometry/tube.hpp"
#include "ringgan/image_io.hpp"
#include "ringgan/rng.hpp"

namespace ringgan::service {

namespace fs = std::filesystem;

void to_json(nlohmann::json& j, const RingRecord& r) {
  j = {{"id", r.id},
       {"spec", r.spec},
       {"created_at", r.created_at},
       {"has_render", r.has_render},
       {"has_mesh", r.has_mesh}};
}

void from_json(const nlohmann::json& j, RingRecord& r) {
  r.id = j.at("id").get<std::string>();
  r.spec = j.at("spec").get<geometry::RingSpec>();
  r.created_at = j.at("created_at").get<std::string>();
  r.has_render = j.value("has_render", false);
  r.has_mesh = j.value("has_mesh", false);
}

void write_atomic(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  write_file(tmp, bytes);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(path.string() + ": cannot move file into place");
  }
}

namespace {

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool valid_id(const std::string& id) {
  if (id.size() != 16) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

std::vector<std::uint8_t> as_bytes(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

RingStore::RingStore(fs::path data_dir, int image_size)
    : root_(std::move(data_dir)), image_size_(image_size), id_state_(std::random_device{}()) {
  if (image_size_ < 8 || image_size_ > 4096) throw ValidationError("image size must be in [8, 4096]");
  id_state_ = (id_state_ << 32) ^ static_cast<std::uint64_t>(
                                      std::chrono::steady_clock::now().time_since_epoch().count());
  try {
    fs::create_directories(root_ / "rings");
    for (const auto& entry : fs::directory_iterator(root_ / "rings")) {
      const fs::path record = entry.path() / "record.json";
      if (!entry.is_directory() || !fs::exists(record)) continue;
      const auto bytes = read_file(record);
      RingRecord r = nlohmann::json::parse(bytes.begin(), bytes.end()).get<RingRecord>();
      r.has_render = fs::exists(entry.path() / "render.png");
      r.has_mesh = fs::exists(entry.path() / "mesh.stl");
      records_.emplace(r.id, r);
    }
  } catch (const fs::filesystem_error& e) {
    throw IoError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("corrupt ring record: ") + e.what());
  }
}

fs::path RingStore::ring_dir(const std::string& id) const { return root_ / "rings" / id; }

std::string RingStore::fresh_id() {
  for (;;) {
    id_state_ += 0x9E3779B97F4A7C15ULL;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(mix_seed(id_state_)));
    if (!records_.contains(buf)) return buf;
  }
}

void RingStore::write_record(const RingRecord& record) {
  write_atomic(ring_dir(record.id) / "record.json", as_bytes(nlohmann::json(record).dump(2) + "\n"));
}

RingRecord RingStore::create(const geometry::RingSpec& spec) {
  const geometry::RingModel ring = geometry::generate_ring(spec);
  const auto png = encode_png(data::make_sketch(ring, spec.seed, image_size_));

  std::unique_lock lock(mutex_);
  RingRecord record{fresh_id(), spec, now_utc(), false, false};
  const fs::path dir = ring_dir(record.id);
  try {
    fs::create_directories(dir);
    write_atomic(dir / "sketch.png", png);
    write_record(record);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    throw;
  }
  records_.emplace(record.id, record);
  return record;
}

std::optional<RingRecord> RingStore::get(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::vector<RingRecord> RingStore::list() const {
  std::shared_lock lock(mutex_);
  std::vector<RingRecord> out;
  for (const auto& [id, r] : records_) out.push_back(r);
  return out;
}

std::size_t RingStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::vector<std::uint8_t> RingStore::sketch_png(const std::string& id) const {
  if (!valid_id(id) || !get(id)) throw ValidationError("unknown ring " + id);
  return read_file(ring_dir(id) / "sketch.png");
}

std::vector<std::uint8_t> RingStore::mesh_stl(const std::string& id) {
  const auto record = get(id);
  if (!record) throw ValidationError("unknown ring " + id);
  const fs::path path = ring_dir(id) / "mesh.stl";
  std::lock_guard mesh_lock(mesh_mutex_);
  if (fs::exists(path)) {
    ++mesh_cache_hits_;
    return read_file(path);
  }
  const auto bytes = geometry::export_mesh(geometry::ring_mesh(geometry::generate_ring(record->spec)).mesh,
                                           geometry::MeshFormat::kStlBinary);
  std::unique_lock lock(mutex_);
  write_atomic(path, bytes);
  records_[id].has_mesh = true;
  write_record(records_[id]);
  ++mesh_generations_;
  return bytes;
}

std::optional<std::vector<std::uint8_t>> RingStore::render_png(const std::string& id) const {
  const auto record = get(id);
  if (!record || !record->has_render) return std::nullopt;
  return read_file(ring_dir(id) / "render.png");
}

void RingStore::put_render(const std::string& id, const std::vector<std::uint8_t>& png) {
  std::unique_lock lock(mutex_);
  const auto it = records_.find(id);
  if (it == records_.end()) throw ValidationError("unknown ring " + id);
  write_atomic(ring_dir(id) / "render.png", png);
  it->second.has_render = true;
  write_record(it->second);
}

}  // namespace ringgan::service
