#pragma once

#include <optional>

#include "ringgan/geometry/ring.hpp"

namespace ringgan::geometry {

/// Pinhole camera. Pixel (x, y) covers [x, x+1) x [y, y+1); y grows downward.
struct Camera {
  Vec3 eye{0.0, -4.0, 2.0};
  Vec3 target{0.0, 0.0, 0.0};
  Vec3 up{0.0, 0.0, 1.0};
  double vertical_fov = 0.6;  // radians
  int width = 64;
  int height = 64;
};

void validate(const Camera& camera);

/// Camera-space position: x right, y up, z forward (depth).
struct ViewBasis {
  Vec3 right;
  Vec3 up;
  Vec3 forward;
  double focal_px;  // pixels per unit of x/z
};

ViewBasis view_basis(const Camera& camera);

struct Projected {
  double x;
  double y;
  double depth;
};

/// Projects a world point; std::nullopt when it is not in front of the eye.
std::optional<Projected> project(const Camera& camera, const Vec3& point);

/// Camera on a sphere of `distance` around the origin, looking at it.
Camera orbit_camera(double azimuth, double elevation, double distance, double vertical_fov, int width, int height);

void to_json(nlohmann::json& j, const Camera& camera);
void from_json(const nlohmann::json& j, Camera& camera);

}  // namespace ringgan::geometry
