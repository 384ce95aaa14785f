#include "ringgan/tensor/image_tensor.hpp"

#include "ringgan/error.hpp"

namespace ringgan::tensor {

Tensorf image_to_tensor(const Image& image) {
  const auto h = static_cast<std::size_t>(image.height());
  const auto w = static_cast<std::size_t>(image.width());
  const std::size_t plane = h * w;
  std::vector<float> data(3 * plane);
  const auto& px = image.data();
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t c = 0; c < 3; ++c) data[c * plane + i] = 2.0F * px[3 * i + c] - 1.0F;
  }
  return Tensorf::from_data({1, 3, image.height(), image.width()}, std::move(data));
}

Image tensor_to_image(const Tensorf& t) {
  const bool batched = t.rank() == 4;
  if (!(batched && t.dim(0) == 1 && t.dim(1) == 3) && !(t.rank() == 3 && t.dim(0) == 3)) {
    throw ShapeError("tensor_to_image expects [1, 3, H, W] or [3, H, W], got " + to_string(t.shape()));
  }
  const auto h = static_cast<int>(t.dim(t.rank() - 2));
  const auto w = static_cast<int>(t.dim(t.rank() - 1));
  const std::size_t plane = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
  Image image(w, h);
  auto& px = image.data();
  const auto data = t.data();
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t c = 0; c < 3; ++c) px[3 * i + c] = 0.5F * (data[c * plane + i] + 1.0F);
  }
  image.clamp();
  return image;
}

}  // namespace ringgan::tensor
