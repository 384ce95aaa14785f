#pragma once

#include <cstddef>
#include <filesystem>

#include "ringgan/data/dataset.hpp"
#include "ringgan/image.hpp"
#include "ringgan/tensor/tensor.hpp"

namespace ringgan::data {

struct ImageSample {
  tensor::Tensorf pixels;  // [3, S, S] in [-1, 1]
  Domain domain = Domain::kA;
  std::size_t index = 0;
};

/// Separable resize with a triangle (tent) kernel whose support widens with
/// the downscale factor, so every source pixel contributes when shrinking.
/// Equals plain bilinear interpolation when enlarging.
Image resize_bilinear(const Image& image, int width, int height);

/// Decodes a PNG or JPEG, resizes to target_size square and maps [0, 255]
/// to [-1, 1]. Errors name the file.
ImageSample load_sample(const std::filesystem::path& file, int target_size, Domain domain = Domain::kA,
                        std::size_t index = 0);

}  // namespace ringgan::data
