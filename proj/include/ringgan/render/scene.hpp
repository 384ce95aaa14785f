#pragma once

#include <cstdint>

#include "ringgan/geometry/camera.hpp"
#include "ringgan/image.hpp"

namespace ringgan::render {

using geometry::Camera;
using geometry::Vec3;

struct Material {
  Rgb base_color{0.78F, 0.78F, 0.80F};
  double specular_strength = 0.6;
  double shininess = 48.0;
};

struct Scene {
  Camera camera;
  Vec3 light_dir{0.0, 0.0, 1.0};  // unit, pointing toward the light
  double light_intensity = 1.0;
  double ambient = 0.2;
  Material material;
  Rgb background = kRenderBackground;
  double grain_sigma = 0.0;
};

void validate(const Scene& scene);

/// Randomized lighting and viewpoint for one rendered-domain image.
/// Light direction uniform on the upper hemisphere; eye on a sphere of radius
/// 3-5 x ring_radius at elevation 10-60 degrees; grain sigma in [0, 0.02].
Scene make_scene(std::uint64_t seed, int width, int height, double ring_radius = 1.0);

void to_json(nlohmann::json& j, const Scene& scene);
void from_json(const nlohmann::json& j, Scene& scene);

}  // namespace ringgan::render
