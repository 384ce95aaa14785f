#include "ringgan/geometry/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ringgan/error.hpp"
#include "ringgan/geometry/spline.hpp"

namespace ringgan::geometry {
namespace {

constexpr int kSub = 4;  // subsamples per pixel axis

double segment_distance_sq(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len_sq = ab.squaredNorm();
  const double t = len_sq > 0.0 ? std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0) : 0.0;
  return (a + t * ab - p).squaredNorm();
}

}  // namespace

int sketch_samples_per_strand(const Camera& camera) { return std::max(256, 4 * (camera.width + camera.height)); }

double sketch_line_width(const RingModel& ring, const Camera& camera) {
  const ViewBasis basis = view_basis(camera);
  const double distance = std::max(camera.eye.norm(), 1e-9);
  return std::max(1.0, 2.0 * ring.tube_radius * basis.focal_px / distance);
}

std::vector<std::vector<Eigen::Vector2d>> project_strands(const RingModel& ring, const Camera& camera) {
  validate(camera);
  const int samples = sketch_samples_per_strand(camera);
  std::vector<std::vector<Eigen::Vector2d>> out;
  for (const Spline& strand : ring.strands) {
    std::vector<Eigen::Vector2d> line;
    line.reserve(static_cast<std::size_t>(samples));
    for (const Vec3& p : sample_spline(strand, samples)) {
      if (auto q = project(camera, p)) line.emplace_back(q->x, q->y);
    }
    out.push_back(std::move(line));
  }
  return out;
}

Image project_sketch(const RingModel& ring, const Camera& camera, double line_width) {
  validate(camera);
  if (!(line_width >= 1.0)) throw ValidationError("project_sketch: line_width must be >= 1");
  Image image(camera.width, camera.height, kSketchPaper);
  if (ring.strands.empty()) return image;

  const int samples = sketch_samples_per_strand(camera);
  const double radius = 0.5 * line_width;
  const double radius_sq = radius * radius;
  std::vector<std::uint16_t> coverage(static_cast<std::size_t>(camera.width) * camera.height, 0);
  bool any_visible = false;

  for (const Spline& strand : ring.strands) {
    std::vector<std::optional<Projected>> pts;
    pts.reserve(static_cast<std::size_t>(samples));
    for (const Vec3& p : sample_spline(strand, samples)) pts.push_back(project(camera, p));
    for (int i = 0; i < samples; ++i) {
      const auto& pa = pts[i];
      const auto& pb = pts[(i + 1) % samples];
      if (!pa || !pb) continue;
      any_visible = true;
      const Eigen::Vector2d a(pa->x, pa->y);
      const Eigen::Vector2d b(pb->x, pb->y);
      const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x(), b.x()) - radius)));
      const int x1 = std::min(camera.width - 1, static_cast<int>(std::floor(std::max(a.x(), b.x()) + radius)));
      const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y(), b.y()) - radius)));
      const int y1 = std::min(camera.height - 1, static_cast<int>(std::floor(std::max(a.y(), b.y()) + radius)));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          std::uint16_t& mask = coverage[static_cast<std::size_t>(y) * camera.width + x];
          if (mask == 0xFFFF) continue;
          for (int s = 0; s < kSub * kSub; ++s) {
            const std::uint16_t bit = static_cast<std::uint16_t>(1U << s);
            if (mask & bit) continue;
            const Eigen::Vector2d p(x + (s % kSub + 0.5) / kSub, y + (s / kSub + 0.5) / kSub);
            if (segment_distance_sq(p, a, b) <= radius_sq) mask |= bit;
          }
        }
      }
    }
  }
  if (!any_visible) throw ValidationError("project_sketch: ring lies entirely behind the camera");

  for (int y = 0; y < camera.height; ++y) {
    for (int x = 0; x < camera.width; ++x) {
      const int covered = std::popcount(coverage[static_cast<std::size_t>(y) * camera.width + x]);
      if (covered == 0) continue;
      if (covered == kSub * kSub) {
        image.set(x, y, kSketchInk);
        continue;
      }
      const float w = static_cast<float>(covered) / (kSub * kSub);
      image.set(x, y, {kSketchPaper.r + (kSketchInk.r - kSketchPaper.r) * w,
                       kSketchPaper.g + (kSketchInk.g - kSketchPaper.g) * w,
                       kSketchPaper.b + (kSketchInk.b - kSketchPaper.b) * w});
    }
  }
  return image;
}

}  // namespace ringgan::geometry
