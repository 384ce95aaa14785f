#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ringgan/image.hpp"

namespace ringgan {

/// Encodes an 8-bit RGB PNG. The encoding is deterministic for a given image.
std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> bytes);

/// Decodes PNG or JPEG by signature.
Image decode_image(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const Image& image);
Image read_image(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace ringgan
