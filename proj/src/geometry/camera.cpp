#include "ringgan/geometry/camera.hpp"

#include <cmath>
#include <numbers>

#include "ringgan/error.hpp"

namespace ringgan::geometry {
namespace {

constexpr double kNearDepth = 1e-6;

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

Vec3 json_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw ValidationError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void validate(const Camera& camera) {
  if ((camera.eye - camera.target).norm() <= 0.0) throw ValidationError("Camera: eye must differ from target");
  if (!(camera.vertical_fov > 0.0 && camera.vertical_fov < std::numbers::pi)) {
    throw ValidationError("Camera: vertical_fov must lie in (0, pi)");
  }
  if (camera.width <= 0 || camera.height <= 0) throw ValidationError("Camera: image size must be positive");
  const Vec3 forward = (camera.target - camera.eye).normalized();
  if (camera.up.norm() == 0.0 || forward.cross(camera.up.normalized()).norm() < 1e-9) {
    throw ValidationError("Camera: up must not be parallel to the view direction");
  }
}

ViewBasis view_basis(const Camera& camera) {
  validate(camera);
  const Vec3 forward = (camera.target - camera.eye).normalized();
  const Vec3 right = forward.cross(camera.up).normalized();
  const Vec3 up = right.cross(forward);
  const double focal = 0.5 * camera.height / std::tan(0.5 * camera.vertical_fov);
  return {right, up, forward, focal};
}

std::optional<Projected> project(const Camera& camera, const Vec3& point) {
  const ViewBasis basis = view_basis(camera);
  const Vec3 rel = point - camera.eye;
  const double depth = rel.dot(basis.forward);
  if (depth <= kNearDepth) return std::nullopt;
  const double x = 0.5 * camera.width + basis.focal_px * rel.dot(basis.right) / depth;
  const double y = 0.5 * camera.height - basis.focal_px * rel.dot(basis.up) / depth;
  return Projected{x, y, depth};
}

Camera orbit_camera(double azimuth, double elevation, double distance, double vertical_fov, int width, int height) {
  Camera camera;
  camera.eye = distance * Vec3(std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
                               std::sin(elevation));
  camera.target = Vec3::Zero();
  camera.up = Vec3::UnitZ();
  camera.vertical_fov = vertical_fov;
  camera.width = width;
  camera.height = height;
  return camera;
}

void to_json(nlohmann::json& j, const Camera& camera) {
  j = nlohmann::json{{"eye", vec_json(camera.eye)},
                     {"target", vec_json(camera.target)},
                     {"up", vec_json(camera.up)},
                     {"vertical_fov", camera.vertical_fov},
                     {"width", camera.width},
                     {"height", camera.height}};
}

void from_json(const nlohmann::json& j, Camera& camera) {
  camera.eye = json_vec(j.at("eye"));
  camera.target = json_vec(j.at("target"));
  camera.up = json_vec(j.at("up"));
  camera.vertical_fov = j.at("vertical_fov").get<double>();
  camera.width = j.at("width").get<int>();
  camera.height = j.at("height").get<int>();
}

}  // namespace ringgan::geometry
