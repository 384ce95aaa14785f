#pragma once

#include <cstdint>

#include "ringgan/geometry/mesh.hpp"
#include "ringgan/geometry/ring.hpp"
#include "ringgan/image.hpp"
#include "ringgan/render/scene.hpp"

namespace ringgan::render {

struct RasterOptions {
  /// Samples per pixel axis; the result is box-filtered down.
  int supersample = 2;
};

/// Z-buffered rasterization with perspective-correct interpolation of
/// position and normal, shaded per sample with Blinn-Phong:
///   base * (ambient + intensity * max(0, n.l)) + specular * max(0, n.h)^shininess
/// Normals facing away from the eye are flipped. Pixels with no covered
/// sample are exactly scene.background; everything is clamped to [0, 1].
Image rasterize(const geometry::TriMesh& mesh, const Scene& scene, RasterOptions options = {});

/// Fraction of each pixel's samples covered by some triangle, row-major.
std::vector<float> coverage(const geometry::TriMesh& mesh, const Scene& scene, RasterOptions options = {});

/// Tube mesh of `ring`, rasterized, with background grain from `grain_seed`.
Image render_ring(const geometry::RingModel& ring, const Scene& scene, std::uint64_t grain_seed);

}  // namespace ringgan::render
