#include "ringgan/render/grain.hpp"

#include <algorithm>

#include "ringgan/error.hpp"
#include "ringgan/rng.hpp"

namespace ringgan::render {

Image add_grain(const Image& image, double sigma, std::uint64_t seed, Rgb background) {
  if (!(sigma >= 0.0)) throw ValidationError("add_grain: sigma must be >= 0");
  Image out = image;
  if (sigma == 0.0) return out;
  Rng rng(derive_seed(seed, 0, 0x4752414E));  // "GRAN"
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image.at(x, y) != background) continue;
      const auto noise = static_cast<float>(sigma * rng.normal());
      out.set(x, y,
              {std::clamp(background.r + noise, 0.0F, 1.0F), std::clamp(background.g + noise, 0.0F, 1.0F),
               std::clamp(background.b + noise, 0.0F, 1.0F)});
    }
  }
  return out;
}

}  // namespace ringgan::render
