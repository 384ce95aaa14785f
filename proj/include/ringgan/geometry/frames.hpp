#pragma once

#include <vector>

#include "ringgan/geometry/ring.hpp"

namespace ringgan::geometry {

struct Frame {
  Vec3 point;
  Vec3 tangent;
  Vec3 normal;
  Vec3 binormal;  // tangent x normal
};

/// Rotation-minimizing frames at t = i / n_samples along a closed spline.
/// The holonomy left after transporting around the loop is spread evenly over
/// the samples so that the frame field closes without a seam.
/// Requires n_samples >= 8; throws on a degenerate tangent.
std::vector<Frame> build_frames(const Spline& spline, int n_samples);

/// Carries `frame` to the sample (point, tangent) by double reflection.
Frame transport_frame(const Frame& frame, const Vec3& point, const Vec3& tangent);

/// Signed angle from a to b about axis (a, b perpendicular to axis).
double signed_angle(const Vec3& a, const Vec3& b, const Vec3& axis);

}  // namespace ringgan::geometry
