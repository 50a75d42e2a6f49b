#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wrinklemap/image.hpp"

namespace wrinklemap {

/// Raw 8-bit samples of a single-channel or palette PNG, without palette expansion.
struct IndexedImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> indices;
};

using PaletteEntry = std::array<std::uint8_t, 3>;

/// Reads an 8-bit grayscale, RGB, RGBA or palette PNG as RGB (gray is
/// replicated, alpha dropped, palette expanded).
RgbImage read_png_rgb(const std::filesystem::path& path);

/// Reads a PNG and returns its luma as a GrayImage; grayscale files are taken as is.
GrayImage read_png_gray(const std::filesystem::path& path);

/// Reads palette indices (palette PNG) or gray levels (8-bit grayscale PNG).
IndexedImage read_png_indexed(const std::filesystem::path& path);

/// Writes round-to-nearest, clamped 8-bit samples.
void write_png_gray(const std::filesystem::path& path, const GrayImage& img);
void write_png_rgb(const std::filesystem::path& path, const RgbImage& img);
void write_png_indexed(const std::filesystem::path& path, const IndexedImage& img,
                       std::span<const PaletteEntry> palette);

}  // namespace wrinklemap
