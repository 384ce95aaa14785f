#include "ringgan/image.hpp"

#include <algorithm>
#include <cmath>

#include "ringgan/error.hpp"

namespace ringgan {

Rgb Rgb::from_hex(std::uint32_t hex) {
  return from_bytes(static_cast<std::uint8_t>((hex >> 16) & 0xFF), static_cast<std::uint8_t>((hex >> 8) & 0xFF),
                    static_cast<std::uint8_t>(hex & 0xFF));
}

Rgb Rgb::from_bytes(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return {static_cast<float>(r) / 255.0F, static_cast<float>(g) / 255.0F, static_cast<float>(b) / 255.0F};
}

std::uint8_t to_byte(float v) {
  const float c = std::clamp(v, 0.0F, 1.0F);
  return static_cast<std::uint8_t>(std::lround(c * 255.0F));
}

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw ValidationError("Image: width and height must be positive");
  pixels_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
}

std::vector<std::uint8_t> Image::to_bytes() const {
  std::vector<std::uint8_t> out(pixels_.size());
  std::transform(pixels_.begin(), pixels_.end(), out.begin(), to_byte);
  return out;
}

Image Image::from_bytes(int width, int height, const std::vector<std::uint8_t>& rgb) {
  Image img(width, height);
  if (rgb.size() != img.pixels_.size()) throw ValidationError("Image::from_bytes: buffer size mismatch");
  for (std::size_t i = 0; i < rgb.size(); ++i) img.pixels_[i] = static_cast<float>(rgb[i]) / 255.0F;
  return img;
}

void Image::clamp() {
  for (auto& v : pixels_) v = std::clamp(v, 0.0F, 1.0F);
}

}  // namespace ringgan
