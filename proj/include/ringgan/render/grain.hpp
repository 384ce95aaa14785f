#pragma once

#include <cstdint>

#include "ringgan/image.hpp"

namespace ringgan::render {

/// Film-grain style noise on background pixels only: every pixel exactly
/// equal to `background` gets one N(0, sigma) offset added to all three
/// channels, then clamped. Other pixels are returned bit-for-bit.
Image add_grain(const Image& image, double sigma, std::uint64_t seed, Rgb background = kRenderBackground);

}  // namespace ringgan::render
