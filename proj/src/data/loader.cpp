#include "ringgan/data/loader.hpp"

#include <algorithm>
#include <cmath>

#include "ringgan/error.hpp"
#include "ringgan/image_io.hpp"
#include "ringgan/tensor/image_tensor.hpp"

namespace ringgan::data {

namespace {

struct Taps {
  int first = 0;
  std::vector<double> weights;
};

std::vector<Taps> resample_taps(int in, int out) {
  const double scale = static_cast<double>(in) / out;
  const double support = std::max(1.0, scale);
  std::vector<Taps> taps(static_cast<std::size_t>(out));
  for (int o = 0; o < out; ++o) {
    const double center = (o + 0.5) * scale;
    const int lo = std::max(0, static_cast<int>(std::floor(center - support)));
    const int hi = std::min(in, static_cast<int>(std::ceil(center + support)));
    Taps& t = taps[static_cast<std::size_t>(o)];
    t.first = lo;
    double total = 0.0;
    for (int i = lo; i < hi; ++i) {
      const double w = std::max(0.0, 1.0 - std::abs((i + 0.5 - center) / support));
      t.weights.push_back(w);
      total += w;
    }
    for (double& w : t.weights) w /= total;
  }
  return taps;
}

}  // namespace

Image resize_bilinear(const Image& image, int width, int height) {
  if (image.empty()) throw ValidationError("cannot resize an empty image");
  if (width < 1 || height < 1) throw ValidationError("resize target must be at least 1x1");
  if (width == image.width() && height == image.height()) return image;

  const auto xt = resample_taps(image.width(), width);
  const auto yt = resample_taps(image.height(), height);
  const auto& src = image.data();
  std::vector<double> rows(static_cast<std::size_t>(image.height()) * static_cast<std::size_t>(width) * 3);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < width; ++x) {
      const Taps& t = xt[static_cast<std::size_t>(x)];
      double acc[3] = {0, 0, 0};
      for (std::size_t k = 0; k < t.weights.size(); ++k) {
        const std::size_t s = (static_cast<std::size_t>(y) * image.width() + t.first + k) * 3;
        for (int c = 0; c < 3; ++c) acc[c] += t.weights[k] * src[s + c];
      }
      for (int c = 0; c < 3; ++c) rows[(static_cast<std::size_t>(y) * width + x) * 3 + c] = acc[c];
    }
  }
  Image out(width, height);
  auto& dst = out.data();
  for (int y = 0; y < height; ++y) {
    const Taps& t = yt[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      double acc[3] = {0, 0, 0};
      for (std::size_t k = 0; k < t.weights.size(); ++k) {
        const std::size_t s = ((t.first + k) * static_cast<std::size_t>(width) + x) * 3;
        for (int c = 0; c < 3; ++c) acc[c] += t.weights[k] * rows[s + c];
      }
      for (int c = 0; c < 3; ++c) dst[(static_cast<std::size_t>(y) * width + x) * 3 + c] = static_cast<float>(acc[c]);
    }
  }
  out.clamp();
  return out;
}

ImageSample load_sample(const std::filesystem::path& file, int target_size, Domain domain, std::size_t index) {
  if (target_size < 1) throw ValidationError("target size must be >= 1");
  const Image image = resize_bilinear(read_image(file), target_size, target_size);
  tensor::Tensorf pixels = tensor::image_to_tensor(image);
  return {tensor::Tensorf::from_data({3, target_size, target_size},
                                     std::vector<float>(pixels.data().begin(), pixels.data().end())),
          domain, index};
}

}  // namespace ringgan::data
