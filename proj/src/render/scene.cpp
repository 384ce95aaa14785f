#include "ringgan/render/scene.hpp"

#include <cmath>
#include <numbers>

#include "ringgan/error.hpp"
#include "ringgan/rng.hpp"

namespace ringgan::render {
namespace {

constexpr double kDegree = std::numbers::pi / 180.0;
constexpr double kSceneFov = 0.8;

nlohmann::json rgb_json(Rgb c) { return nlohmann::json::array({c.r, c.g, c.b}); }

Rgb json_rgb(const nlohmann::json& j) { return {j.at(0).get<float>(), j.at(1).get<float>(), j.at(2).get<float>()}; }

}  // namespace

void validate(const Scene& scene) {
  geometry::validate(scene.camera);
  if (std::abs(scene.light_dir.norm() - 1.0) > 1e-9) throw ValidationError("Scene: light_dir must be unit length");
  if (!(scene.light_intensity >= 0.0)) throw ValidationError("Scene: light_intensity must be >= 0");
  if (!(scene.ambient >= 0.0 && scene.ambient <= 1.0)) throw ValidationError("Scene: ambient must lie in [0, 1]");
  if (!(scene.material.shininess >= 1.0)) throw ValidationError("Scene: shininess must be >= 1");
  if (!(scene.grain_sigma >= 0.0)) throw ValidationError("Scene: grain_sigma must be >= 0");
}

Scene make_scene(std::uint64_t seed, int width, int height, double ring_radius) {
  Rng rng(derive_seed(seed, 0, 0x5343454E));  // "SCEN"
  Scene scene;
  const double z = rng.uniform();
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  scene.light_dir = Vec3(r * std::cos(phi), r * std::sin(phi), z).normalized();
  scene.light_intensity = rng.uniform(0.8, 1.2);
  scene.ambient = rng.uniform(0.15, 0.3);

  const double distance = rng.uniform(3.0, 5.0) * ring_radius;
  const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double elevation = rng.uniform(10.0, 60.0) * kDegree;
  scene.camera = geometry::orbit_camera(azimuth, elevation, distance, kSceneFov, width, height);
  scene.grain_sigma = rng.uniform(0.0, 0.02);
  return scene;
}

void to_json(nlohmann::json& j, const Scene& scene) {
  j = nlohmann::json{{"camera", scene.camera},
                     {"light_dir", {scene.light_dir.x(), scene.light_dir.y(), scene.light_dir.z()}},
                     {"light_intensity", scene.light_intensity},
                     {"ambient", scene.ambient},
                     {"material",
                      {{"base_color", rgb_json(scene.material.base_color)},
                       {"specular_strength", scene.material.specular_strength},
                       {"shininess", scene.material.shininess}}},
                     {"background", rgb_json(scene.background)},
                     {"grain_sigma", scene.grain_sigma}};
}

void from_json(const nlohmann::json& j, Scene& scene) {
  scene.camera = j.at("camera").get<Camera>();
  const auto& l = j.at("light_dir");
  scene.light_dir = Vec3(l.at(0).get<double>(), l.at(1).get<double>(), l.at(2).get<double>());
  scene.light_intensity = j.at("light_intensity").get<double>();
  scene.ambient = j.at("ambient").get<double>();
  const auto& m = j.at("material");
  scene.material.base_color = json_rgb(m.at("base_color"));
  scene.material.specular_strength = m.at("specular_strength").get<double>();
  scene.material.shininess = m.at("shininess").get<double>();
  scene.background = json_rgb(j.at("background"));
  scene.grain_sigma = j.at("grain_sigma").get<double>();
}

}  // namespace ringgan::render
