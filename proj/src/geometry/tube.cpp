#include "ringgan/geometry/tube.hpp"

#include <cmath>
#include <numbers>

#include "ringgan/error.hpp"
#include "ringgan/geometry/frames.hpp"
#include "ringgan/geometry/spline.hpp"

namespace ringgan::geometry {

TubeMesh extrude_tube(const Spline& spline, double radius, int n_u, int n_v) {
  if (n_u < 8) throw ValidationError("extrude_tube: n_u must be >= 8");
  if (n_v < 6) throw ValidationError("extrude_tube: n_v must be >= 6");
  if (!(radius > 0.0)) throw ValidationError("extrude_tube: radius must be > 0");
  const std::vector<Frame> frames = build_frames(spline, n_u);

  TubeMesh out;
  TriMesh& mesh = out.mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(n_u) * n_v);
  mesh.normals.reserve(mesh.vertices.capacity());
  for (const Frame& f : frames) {
    for (int j = 0; j < n_v; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n_v;
      const Vec3 dir = std::cos(theta) * f.normal + std::sin(theta) * f.binormal;
      mesh.vertices.push_back(f.point + radius * dir);
      mesh.normals.push_back(dir);
    }
  }
  auto index = [n_u, n_v](int i, int j) {
    return static_cast<std::uint32_t>(((i + n_u) % n_u) * n_v + (j + n_v) % n_v);
  };
  mesh.triangles.reserve(2 * mesh.vertices.size());
  for (int i = 0; i < n_u; ++i) {
    for (int j = 0; j < n_v; ++j) {
      const auto a = index(i, j);
      const auto b = index(i + 1, j);
      const auto c = index(i + 1, j + 1);
      const auto d = index(i, j + 1);
      mesh.triangles.push_back({a, c, b});
      mesh.triangles.push_back({a, d, c});
    }
  }

  double max_curvature = 0.0;
  for (int i = 0; i < n_u; ++i) {
    const double t = static_cast<double>(i) / n_u;
    const Vec3 d1 = eval_spline_derivative(spline, t);
    const Vec3 d2 = eval_spline_second_derivative(spline, t);
    max_curvature = std::max(max_curvature, d1.cross(d2).norm() / std::pow(d1.norm(), 3));
  }
  out.self_intersection_warning = radius * max_curvature >= 1.0;
  return out;
}

TubeMesh ring_mesh(const RingModel& ring, TubeResolution resolution) {
  TubeMesh out;
  for (const Spline& strand : ring.strands) {
    TubeMesh tube = extrude_tube(strand, ring.tube_radius, resolution.n_u, resolution.n_v);
    out.mesh.append(tube.mesh);
    out.self_intersection_warning = out.self_intersection_warning || tube.self_intersection_warning;
  }
  return out;
}

}  // namespace ringgan::geometry
