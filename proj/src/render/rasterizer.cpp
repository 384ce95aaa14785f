#include "ringgan/render/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringgan/error.hpp"
#include "ringgan/geometry/tube.hpp"
#include "ringgan/render/grain.hpp"

namespace ringgan::render {
namespace {

using geometry::TriMesh;

constexpr double kNear = 1e-4;
constexpr std::uint32_t kNoTriangle = std::numeric_limits<std::uint32_t>::max();

struct ScreenVertex {
  double x;
  double y;
  double depth;
};

/// Per-sample visibility result: nearest triangle and its perspective-correct
/// barycentric weights.
struct SampleBuffer {
  int width = 0;
  int height = 0;
  std::vector<double> depth;
  std::vector<std::uint32_t> triangle;
  std::vector<Eigen::Vector3d> weights;
};

SampleBuffer visibility(const TriMesh& mesh, const Scene& scene, int factor) {
  const Camera& cam = scene.camera;
  const geometry::ViewBasis basis = geometry::view_basis(cam);
  SampleBuffer buf;
  buf.width = cam.width * factor;
  buf.height = cam.height * factor;
  const std::size_t n = static_cast<std::size_t>(buf.width) * buf.height;
  buf.depth.assign(n, std::numeric_limits<double>::infinity());
  buf.triangle.assign(n, kNoTriangle);
  buf.weights.assign(n, Eigen::Vector3d::Zero());
  const double focal = basis.focal_px * factor;

  std::vector<ScreenVertex> screen(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3 rel = mesh.vertices[i] - cam.eye;
    const double z = rel.dot(basis.forward);
    screen[i] = {0.5 * buf.width + focal * rel.dot(basis.right) / z, 0.5 * buf.height - focal * rel.dot(basis.up) / z,
                 z};
  }

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const ScreenVertex& a = screen[tri[0]];
    const ScreenVertex& b = screen[tri[1]];
    const ScreenVertex& c = screen[tri[2]];
    // Triangles crossing the near plane are dropped rather than clipped.
    if (a.depth <= kNear || b.depth <= kNear || c.depth <= kNear) continue;
    const double area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (area == 0.0) continue;
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}))));
    const int x1 = std::min(buf.width - 1, static_cast<int>(std::ceil(std::max({a.x, b.x, c.x}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}))));
    const int y1 = std::min(buf.height - 1, static_cast<int>(std::ceil(std::max({a.y, b.y, c.y}))));
    for (int y = y0; y <= y1; ++y) {
      const double py = y + 0.5;
      for (int x = x0; x <= x1; ++x) {
        const double px = x + 0.5;
        double w0 = ((b.x - px) * (c.y - py) - (b.y - py) * (c.x - px)) / area;
        double w1 = ((c.x - px) * (a.y - py) - (c.y - py) * (a.x - px)) / area;
        double w2 = 1.0 - w0 - w1;
        if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
        // Perspective-correct weights: screen weights divided by depth.
        w0 /= a.depth;
        w1 /= b.depth;
        w2 /= c.depth;
        const double inv_depth = w0 + w1 + w2;
        const double depth = 1.0 / inv_depth;
        const std::size_t idx = static_cast<std::size_t>(y) * buf.width + x;
        if (depth < buf.depth[idx]) {
          buf.depth[idx] = depth;
          buf.triangle[idx] = static_cast<std::uint32_t>(t);
          buf.weights[idx] = Eigen::Vector3d(w0, w1, w2) * depth;
        }
      }
    }
  }
  return buf;
}

Rgb shade(const TriMesh& mesh, const Scene& scene, std::uint32_t t, const Eigen::Vector3d& w) {
  const auto& tri = mesh.triangles[t];
  const Vec3 pos = w[0] * mesh.vertices[tri[0]] + w[1] * mesh.vertices[tri[1]] + w[2] * mesh.vertices[tri[2]];
  Vec3 normal;
  if (mesh.normals.size() == mesh.vertices.size()) {
    normal = w[0] * mesh.normals[tri[0]] + w[1] * mesh.normals[tri[1]] + w[2] * mesh.normals[tri[2]];
  } else {
    normal = (mesh.vertices[tri[1]] - mesh.vertices[tri[0]]).cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
  }
  normal.normalize();
  const Vec3 view = (scene.camera.eye - pos).normalized();
  if (normal.dot(view) < 0.0) normal = -normal;
  const Vec3 half = (scene.light_dir + view).normalized();
  const double diffuse = scene.light_intensity * std::max(0.0, normal.dot(scene.light_dir));
  const double specular =
      scene.material.specular_strength * std::pow(std::max(0.0, normal.dot(half)), scene.material.shininess);
  const double lit = scene.ambient + diffuse;
  const Rgb base = scene.material.base_color;
  return {static_cast<float>(base.r * lit + specular), static_cast<float>(base.g * lit + specular),
          static_cast<float>(base.b * lit + specular)};
}

void check_inputs(const Scene& scene, RasterOptions options) {
  if (scene.camera.width <= 0 || scene.camera.height <= 0) throw ValidationError("rasterize: zero-size image");
  validate(scene);
  if (options.supersample < 1) throw ValidationError("rasterize: supersample must be >= 1");
}

}  // namespace

Image rasterize(const TriMesh& mesh, const Scene& scene, RasterOptions options) {
  check_inputs(scene, options);
  const int f = options.supersample;
  const SampleBuffer buf = visibility(mesh, scene, f);
  Image image(scene.camera.width, scene.camera.height, scene.background);
  const double inv = 1.0 / (f * f);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      double r = 0.0;
      double g = 0.0;
      double b = 0.0;
      int covered = 0;
      for (int sy = 0; sy < f; ++sy) {
        for (int sx = 0; sx < f; ++sx) {
          const std::size_t idx = static_cast<std::size_t>(y * f + sy) * buf.width + (x * f + sx);
          Rgb c = scene.background;
          if (buf.triangle[idx] != kNoTriangle) {
            c = shade(mesh, scene, buf.triangle[idx], buf.weights[idx]);
            ++covered;
          }
          r += std::clamp(c.r, 0.0F, 1.0F);
          g += std::clamp(c.g, 0.0F, 1.0F);
          b += std::clamp(c.b, 0.0F, 1.0F);
        }
      }
      if (covered == 0) continue;
      image.set(x, y, {static_cast<float>(r * inv), static_cast<float>(g * inv), static_cast<float>(b * inv)});
    }
  }
  image.clamp();
  return image;
}

std::vector<float> coverage(const TriMesh& mesh, const Scene& scene, RasterOptions options) {
  check_inputs(scene, options);
  const int f = options.supersample;
  const SampleBuffer buf = visibility(mesh, scene, f);
  std::vector<float> out(static_cast<std::size_t>(scene.camera.width) * scene.camera.height, 0.0F);
  for (int y = 0; y < buf.height; ++y) {
    for (int x = 0; x < buf.width; ++x) {
      if (buf.triangle[static_cast<std::size_t>(y) * buf.width + x] != kNoTriangle) {
        out[static_cast<std::size_t>(y / f) * scene.camera.width + x / f] += 1.0F / static_cast<float>(f * f);
      }
    }
  }
  return out;
}

Image render_ring(const geometry::RingModel& ring, const Scene& scene, std::uint64_t grain_seed) {
  const geometry::TubeMesh tube = geometry::ring_mesh(ring);
  return add_grain(rasterize(tube.mesh, scene), scene.grain_sigma, grain_seed, scene.background);
}

}  // namespace ringgan::render
