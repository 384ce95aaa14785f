#include "ringgan/geometry/frames.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "ringgan/error.hpp"
#include "ringgan/geometry/spline.hpp"

namespace ringgan::geometry {
namespace {

constexpr double kDegenerate = 1e-12;

Vec3 any_perpendicular(const Vec3& t) {
  const Vec3 axis = std::abs(t.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (axis - axis.dot(t) * t).normalized();
}

}  // namespace

double signed_angle(const Vec3& a, const Vec3& b, const Vec3& axis) {
  return std::atan2(axis.dot(a.cross(b)), a.dot(b));
}

Frame transport_frame(const Frame& frame, const Vec3& point, const Vec3& tangent) {
  // Wang et al. double reflection: reflect across the bisector plane of the
  // chord, then across the plane that maps the reflected tangent onto `tangent`.
  const Vec3 v1 = point - frame.point;
  const double c1 = v1.squaredNorm();
  Vec3 r = frame.normal;
  Vec3 t = frame.tangent;
  if (c1 > kDegenerate * kDegenerate) {
    r = frame.normal - (2.0 / c1) * v1.dot(frame.normal) * v1;
    t = frame.tangent - (2.0 / c1) * v1.dot(frame.tangent) * v1;
  }
  const Vec3 v2 = tangent - t;
  const double c2 = v2.squaredNorm();
  if (c2 > kDegenerate * kDegenerate) r = r - (2.0 / c2) * v2.dot(r) * v2;
  // Re-orthonormalize to stop rounding drift.
  Vec3 normal = (r - r.dot(tangent) * tangent).normalized();
  return {point, tangent, normal, tangent.cross(normal)};
}

std::vector<Frame> build_frames(const Spline& spline, int n_samples) {
  if (n_samples < 8) throw ValidationError("build_frames: n_samples must be >= 8");
  std::vector<Vec3> points(static_cast<std::size_t>(n_samples));
  std::vector<Vec3> tangents(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(i) / n_samples;
    points[i] = eval_spline(spline, t);
    const Vec3 d = eval_spline_derivative(spline, t);
    if (d.norm() < kDegenerate) throw ValidationError("build_frames: degenerate tangent at sample " + std::to_string(i));
    tangents[i] = d.normalized();
    if (i > 0 && (points[i] - points[i - 1]).norm() < kDegenerate) {
      throw ValidationError("build_frames: consecutive identical samples at " + std::to_string(i));
    }
  }
  if ((points.front() - points.back()).norm() < kDegenerate) {
    throw ValidationError("build_frames: consecutive identical samples at wrap");
  }

  // Start from the curvature direction when it is well defined, so planar
  // curves get in-plane normals.
  const Vec3 t0 = tangents[0];
  const Vec3 curvature = eval_spline_second_derivative(spline, 0.0);
  Vec3 n0 = curvature - curvature.dot(t0) * t0;
  n0 = n0.norm() > 1e-9 ? n0.normalized() : any_perpendicular(t0);

  std::vector<Frame> frames;
  frames.reserve(points.size());
  frames.push_back({points[0], t0, n0, t0.cross(n0)});
  for (int i = 1; i < n_samples; ++i) frames.push_back(transport_frame(frames.back(), points[i], tangents[i]));

  const Frame closing = transport_frame(frames.back(), points[0], t0);
  const double holonomy = signed_angle(closing.normal, n0, t0);
  for (int i = 1; i < n_samples; ++i) {
    Frame& f = frames[i];
    const double angle = holonomy * static_cast<double>(i) / n_samples;
    const Eigen::AngleAxisd rot(angle, f.tangent);
    f.normal = (rot * f.normal).normalized();
    f.normal = (f.normal - f.normal.dot(f.tangent) * f.tangent).normalized();
    f.binormal = f.tangent.cross(f.normal);
  }
  return frames;
}

}  // namespace ringgan::geometry
