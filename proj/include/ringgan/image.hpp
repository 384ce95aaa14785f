#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ringgan {

/// Linear RGB color, channels in [0, 1].
struct Rgb {
  float r = 0.0F;
  float g = 0.0F;
  float b = 0.0F;

  static Rgb from_hex(std::uint32_t hex);
  static Rgb from_bytes(std::uint8_t r, std::uint8_t g, std::uint8_t b);
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Background color of every rendered-domain image (#B9E2EA).
inline const Rgb kRenderBackground = Rgb::from_hex(0xB9E2EA);

/// Working-form RGB image: row-major, three floats per pixel in [0, 1].
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);

  std::vector<float>& data() { return pixels_; }
  const std::vector<float>& data() const { return pixels_; }

  /// Row-major 8-bit RGB (file form), rounding to nearest.
  std::vector<std::uint8_t> to_bytes() const;
  static Image from_bytes(int width, int height, const std::vector<std::uint8_t>& rgb);

  /// Clamps every channel into [0, 1].
  void clamp();

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> pixels_;
};

std::uint8_t to_byte(float v);

}  // namespace ringgan
