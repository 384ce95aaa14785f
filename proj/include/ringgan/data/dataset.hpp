#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ringgan/geometry/camera.hpp"
#include "ringgan/geometry/ring.hpp"
#include "ringgan/image.hpp"

namespace ringgan::data {

enum class Domain { kA, kB };  // A: sketches, B: renders

const char* to_string(Domain d);

inline constexpr const char* kGeneratorVersion = "ringgan-dataset/1";

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Bounds from which each ring's RingSpec is drawn.
struct SpecRanges {
  Range n_strands{2, 4};  // integer range, inclusive
  Range n_control_points{6, 10};
  Range tube_radius{0.03, 0.08};
  Range radial_amplitude{0.05, 0.15};
  Range height_amplitude{0.05, 0.2};
  double ring_radius = 1.0;

  void validate() const;
};

void to_json(nlohmann::json& j, const SpecRanges& r);
void from_json(const nlohmann::json& j, SpecRanges& r);

/// Deterministic RingSpec for a ring seed.
geometry::RingSpec sample_spec(const SpecRanges& ranges, std::uint64_t ring_seed);

struct DatasetEntry {
  std::string file;  // relative to the dataset root
  std::uint64_t ring_seed = 0;
  std::optional<std::uint64_t> scene_seed;  // domain B only
};

struct DatasetManifest {
  Domain domain = Domain::kA;
  std::vector<DatasetEntry> entries;
  int image_size = 64;
  std::string created_at;
  std::string generator_version = kGeneratorVersion;
  std::uint64_t master_seed = 0;
  SpecRanges ranges;
};

void to_json(nlohmann::json& j, const DatasetManifest& m);
void from_json(const nlohmann::json& j, DatasetManifest& m);

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct DatasetOptions {
  int n_a = 8;
  int n_b = 8;
  int image_size = 64;
  std::uint64_t seed = 0;
  SpecRanges ranges;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Manifest timestamp; empty means now, or SOURCE_DATE_EPOCH when set.
  std::string created_at;

  void validate() const;
};

/// Camera used for a domain-A sketch of this ring.
geometry::Camera sketch_camera(std::uint64_t ring_seed, int image_size, double ring_radius);

/// Domain-A image: perspective line drawing of the ring.
Image make_sketch(const geometry::RingModel& ring, std::uint64_t ring_seed, int image_size);
/// Domain-B image: shaded render under a scene drawn from scene_seed.
Image make_render(const geometry::RingModel& ring, std::uint64_t scene_seed, int image_size);

/// Rebuilds the image of entry `index` from its recorded seeds alone.
Image regenerate_entry(const DatasetManifest& manifest, std::size_t index);

/// Writes out_dir/{trainA,trainB}/NNNN.png and out_dir/manifest_{a,b}.json.
/// Sketch and render rings come from disjoint seed streams. Refuses to
/// overwrite an existing dataset; on failure removes everything it created.
std::pair<DatasetManifest, DatasetManifest> generate_dataset(const DatasetOptions& options,
                                                             const std::filesystem::path& out_dir);

std::filesystem::path manifest_path(const std::filesystem::path& root, Domain d);

}  // namespace ringgan::data
