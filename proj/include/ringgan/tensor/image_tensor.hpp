#pragma once

#include "ringgan/image.hpp"
#include "ringgan/tensor/tensor.hpp"

namespace ringgan::tensor {

/// [0, 1] RGB image to a [1, 3, H, W] tensor in [-1, 1].
Tensorf image_to_tensor(const Image& image);

/// [1, 3, H, W] or [3, H, W] tensor in [-1, 1] back to an image, clamped.
Image tensor_to_image(const Tensorf& t);

}  // namespace ringgan::tensor
