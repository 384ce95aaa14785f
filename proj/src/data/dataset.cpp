#include "ringgan/data/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "ringgan/error.hpp"
#include "ringgan/geometry/sketch.hpp"
#include "ringgan/image_io.hpp"
#include "ringgan/render/rasterizer.hpp"
#include "ringgan/render/scene.hpp"
#include "ringgan/rng.hpp"

namespace ringgan::data {

namespace fs = std::filesystem;

const char* to_string(Domain d) { return d == Domain::kA ? "A" : "B"; }

void SpecRanges::validate() const {
  auto check = [](const char* name, Range r, double min) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi || r.lo < min) {
      throw ValidationError(std::string("spec range ") + name + " must satisfy " + std::to_string(min) +
                            " <= lo <= hi");
    }
  };
  check("n_strands", n_strands, 1);
  check("n_control_points", n_control_points, 4);
  check("tube_radius", tube_radius, 0);
  check("radial_amplitude", radial_amplitude, 0);
  check("height_amplitude", height_amplitude, 0);
  if (!(ring_radius > 0.0)) throw ValidationError("spec range ring_radius must be > 0");
  if (!(tube_radius.lo > 0.0) || !(tube_radius.hi < ring_radius)) {
    throw ValidationError("spec range tube_radius must lie in (0, ring_radius)");
  }
  if (!(radial_amplitude.hi < ring_radius)) throw ValidationError("spec range radial_amplitude must be < ring_radius");
}

void to_json(nlohmann::json& j, const SpecRanges& r) {
  auto pair = [](Range x) { return nlohmann::json::array({x.lo, x.hi}); };
  j = {{"n_strands", pair(r.n_strands)},
       {"n_control_points", pair(r.n_control_points)},
       {"tube_radius", pair(r.tube_radius)},
       {"radial_amplitude", pair(r.radial_amplitude)},
       {"height_amplitude", pair(r.height_amplitude)},
       {"ring_radius", r.ring_radius}};
}

void from_json(const nlohmann::json& j, SpecRanges& r) {
  static const std::set<std::string> known = {"n_strands",        "n_control_points", "tube_radius",
                                              "radial_amplitude", "height_amplitude", "ring_radius"};
  if (!j.is_object()) throw ValidationError("spec ranges must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ValidationError("spec ranges have no field '" + key + "'");
  }
  auto range = [&](const char* key, Range fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ValidationError(std::string("spec range ") + key + " must be [lo, hi]");
    }
    return Range{v[0].get<double>(), v[1].get<double>()};
  };
  const SpecRanges d;
  r.n_strands = range("n_strands", d.n_strands);
  r.n_control_points = range("n_control_points", d.n_control_points);
  r.tube_radius = range("tube_radius", d.tube_radius);
  r.radial_amplitude = range("radial_amplitude", d.radial_amplitude);
  r.height_amplitude = range("height_amplitude", d.height_amplitude);
  r.ring_radius = j.value("ring_radius", d.ring_radius);
}

geometry::RingSpec sample_spec(const SpecRanges& ranges, std::uint64_t ring_seed) {
  Rng rng(derive_seed(ring_seed, 0, stream_tag("SPEC")));
  auto integer = [&rng](Range r) {
    const auto lo = static_cast<std::int64_t>(std::ceil(r.lo));
    const auto hi = static_cast<std::int64_t>(std::floor(r.hi));
    return static_cast<int>(lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))));
  };
  geometry::RingSpec spec;
  spec.n_strands = integer(ranges.n_strands);
  spec.n_control_points = integer(ranges.n_control_points);
  spec.ring_radius = ranges.ring_radius;
  spec.tube_radius = rng.uniform(ranges.tube_radius.lo, ranges.tube_radius.hi);
  spec.radial_amplitude = rng.uniform(ranges.radial_amplitude.lo, ranges.radial_amplitude.hi);
  spec.height_amplitude = rng.uniform(ranges.height_amplitude.lo, ranges.height_amplitude.hi);
  spec.seed = ring_seed;
  return spec;
}

void to_json(nlohmann::json& j, const DatasetManifest& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json entry = {{"file", e.file}, {"ring_seed", e.ring_seed}};
    if (e.scene_seed) entry["scene_seed"] = *e.scene_seed;
    entries.push_back(entry);
  }
  j = {{"domain", to_string(m.domain)},
       {"image_size", m.image_size},
       {"created_at", m.created_at},
       {"generator_version", m.generator_version},
       {"master_seed", m.master_seed},
       {"spec_ranges", m.ranges},
       {"entries", entries}};
}

void from_json(const nlohmann::json& j, DatasetManifest& m) {
  try {
    const std::string domain = j.at("domain").get<std::string>();
    if (domain != "A" && domain != "B") throw ValidationError("manifest domain must be \"A\" or \"B\"");
    m.domain = domain == "A" ? Domain::kA : Domain::kB;
    m.image_size = j.at("image_size").get<int>();
    m.created_at = j.at("created_at").get<std::string>();
    m.generator_version = j.at("generator_version").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.ranges = j.at("spec_ranges").get<SpecRanges>();
    m.entries.clear();
    for (const auto& e : j.at("entries")) {
      DatasetEntry entry{e.at("file").get<std::string>(), e.at("ring_seed").get<std::uint64_t>(), std::nullopt};
      if (e.contains("scene_seed")) entry.scene_seed = e.at("scene_seed").get<std::uint64_t>();
      if (m.domain == Domain::kB && !entry.scene_seed) {
        throw ValidationError("manifest entry " + entry.file + " has no scene_seed");
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
}

DatasetManifest read_manifest(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    return nlohmann::json::parse(bytes.begin(), bytes.end()).get<DatasetManifest>();
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  const std::string text = nlohmann::json(manifest).dump(2) + "\n";
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

fs::path manifest_path(const fs::path& root, Domain d) {
  return root / (d == Domain::kA ? "manifest_a.json" : "manifest_b.json");
}

void DatasetOptions::validate() const {
  if (n_a < 1) throw ValidationError("n_a must be >= 1");
  if (n_b < 1) throw ValidationError("n_b must be >= 1");
  if (image_size < 8 || image_size > 4096) throw ValidationError("image size must be in [8, 4096]");
  ranges.validate();
}

geometry::Camera sketch_camera(std::uint64_t ring_seed, int image_size, double ring_radius) {
  return render::make_scene(derive_seed(ring_seed, 0, stream_tag("VIEW")), image_size, image_size, ring_radius).camera;
}

Image make_sketch(const geometry::RingModel& ring, std::uint64_t ring_seed, int image_size) {
  const geometry::Camera camera = sketch_camera(ring_seed, image_size, ring.spec.ring_radius);
  return geometry::project_sketch(ring, camera, geometry::sketch_line_width(ring, camera));
}

Image make_render(const geometry::RingModel& ring, std::uint64_t scene_seed, int image_size) {
  const render::Scene scene = render::make_scene(scene_seed, image_size, image_size, ring.spec.ring_radius);
  return render::render_ring(ring, scene, derive_seed(scene_seed, 0, stream_tag("GRAIN")));
}

Image regenerate_entry(const DatasetManifest& manifest, std::size_t index) {
  const DatasetEntry& entry = manifest.entries.at(index);
  const geometry::RingModel ring = geometry::generate_ring(sample_spec(manifest.ranges, entry.ring_seed));
  if (manifest.domain == Domain::kA) return make_sketch(ring, entry.ring_seed, manifest.image_size);
  if (!entry.scene_seed) throw ValidationError("render entry " + entry.file + " has no scene_seed");
  return make_render(ring, *entry.scene_seed, manifest.image_size);
}

namespace {

std::string timestamp(const std::string& fixed) {
  if (!fixed.empty()) return fixed;
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d.png", index);
  return buf;
}

}  // namespace

std::pair<DatasetManifest, DatasetManifest> generate_dataset(const DatasetOptions& options, const fs::path& out_dir) {
  options.validate();
  const fs::path dir_a = out_dir / "trainA";
  const fs::path dir_b = out_dir / "trainB";
  for (const fs::path& p : {dir_a, dir_b, manifest_path(out_dir, Domain::kA), manifest_path(out_dir, Domain::kB)}) {
    if (fs::exists(p)) throw ValidationError(p.string() + " already exists; refusing to overwrite a dataset");
  }

  DatasetManifest a;
  DatasetManifest b;
  a.domain = Domain::kA;
  b.domain = Domain::kB;
  for (DatasetManifest* m : {&a, &b}) {
    m->image_size = options.image_size;
    m->created_at = timestamp(options.created_at);
    m->master_seed = options.seed;
    m->ranges = options.ranges;
  }
  std::set<std::uint64_t> sketch_seeds;
  for (int i = 0; i < options.n_a; ++i) {
    const std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(i), stream_tag("RINGA"));
    sketch_seeds.insert(seed);
    a.entries.push_back({"trainA/" + file_name(i), seed, std::nullopt});
  }
  std::uint64_t stream_index = 0;
  for (int i = 0; i < options.n_b; ++i) {
    std::uint64_t seed = 0;
    do {
      seed = derive_seed(options.seed, stream_index++, stream_tag("RINGB"));
    } while (sketch_seeds.contains(seed));
    const std::uint64_t scene = derive_seed(options.seed, static_cast<std::uint64_t>(i), stream_tag("SCENE"));
    b.entries.push_back({"trainB/" + file_name(i), seed, scene});
  }

  std::vector<std::pair<const DatasetManifest*, std::size_t>> jobs;
  for (std::size_t i = 0; i < a.entries.size(); ++i) jobs.emplace_back(&a, i);
  for (std::size_t i = 0; i < b.entries.size(); ++i) jobs.emplace_back(&b, i);

  auto cleanup = [&] {
    std::error_code ec;
    fs::remove_all(dir_a, ec);
    fs::remove_all(dir_b, ec);
    fs::remove(manifest_path(out_dir, Domain::kA), ec);
    fs::remove(manifest_path(out_dir, Domain::kB), ec);
  };

  try {
    fs::create_directories(dir_a);
    fs::create_directories(dir_b);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (std::size_t k = next++; k < jobs.size(); k = next++) {
        try {
          const auto& [manifest, index] = jobs[k];
          write_png(out_dir / manifest->entries[index].file, regenerate_entry(*manifest, index));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = jobs.size();
        }
      }
    };
    unsigned threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    write_manifest(manifest_path(out_dir, Domain::kA), a);
    write_manifest(manifest_path(out_dir, Domain::kB), b);
  } catch (const fs::filesystem_error& e) {
    cleanup();
    throw IoError(e.what());
  } catch (...) {
    cleanup();
    throw;
  }
  return {a, b};
}

}  // namespace ringgan::data
