#include "wrinklemap/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "wrinklemap/error.hpp"

namespace wrinklemap {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  require(f != nullptr, ErrorCode::kIo, "cannot open " + path.string());
  return f;
}

enum class Layout { kRgb, kIndexed };

struct Decoded {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;
};

// Keeps libpng quiet on stderr; the message ends up in the thrown error.
void on_png_error(png_structp png, png_const_charp message) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text != nullptr) *text = message;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

// Reads with the transforms needed for `layout`. Returns an empty string on
// success, otherwise the libpng diagnostic.
std::string decode(std::FILE* file, Layout layout, Decoded& out) {
  static thread_local std::string diagnostic;
  diagnostic.clear();
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &diagnostic, on_png_error, on_png_warning);
  if (png == nullptr) return "out of memory";
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return "out of memory";
  }
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return diagnostic.empty() ? "corrupt or unsupported PNG data" : "corrupt PNG data (" + diagnostic + ")";
  }
  png_init_io(png, file);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (layout == Layout::kIndexed) {
    if (color_type != PNG_COLOR_TYPE_PALETTE && color_type != PNG_COLOR_TYPE_GRAY) {
      png_destroy_read_struct(&png, &info, nullptr);
      return "expected a palette or grayscale PNG";
    }
    if (bit_depth < 8) png_set_packing(png);
  } else {
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    const bool gray_source =
        color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA;
    if (layout == Layout::kRgb && gray_source) png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.samples.assign(stride * static_cast<std::size_t>(out.height), 0);
  rows.resize(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[static_cast<std::size_t>(y)] = out.samples.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return {};
}

Decoded read(const std::filesystem::path& path, Layout layout) {
  FilePtr file = open_file(path, "rb");
  png_byte signature[8] = {};
  const bool is_png = std::fread(signature, 1, 8, file.get()) == 8 && png_sig_cmp(signature, 0, 8) == 0;
  require(is_png, ErrorCode::kIo, path.string() + " is not a PNG file");
  std::rewind(file.get());
  Decoded decoded;
  const std::string problem = decode(file.get(), layout, decoded);
  require(problem.empty(), ErrorCode::kIo, path.string() + ": " + problem);
  return decoded;
}

std::string encode(std::FILE* file, int width, int height, int color_type,
                   const std::vector<std::uint8_t>& samples, int channels,
                   std::span<const PaletteEntry> palette) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
  if (png == nullptr) return "out of memory";
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return "out of memory";
  }
  std::vector<png_color> colors;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return "PNG encoding failed";
  }
  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    for (const PaletteEntry& e : palette) colors.push_back(png_color{e[0], e[1], e[2]});
    png_set_PLTE(png, info, colors.data(), static_cast<int>(colors.size()));
  }
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(samples.data() + stride * y);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return {};
}

void write(const std::filesystem::path& path, int width, int height, int color_type,
           const std::vector<std::uint8_t>& samples, int channels,
           std::span<const PaletteEntry> palette = {}) {
  require(width > 0 && height > 0, ErrorCode::kInvalidInput, "cannot write an empty PNG");
  FilePtr file = open_file(path, "wb");
  const std::string problem = encode(file.get(), width, height, color_type, samples, channels, palette);
  require(problem.empty(), ErrorCode::kIo, path.string() + ": " + problem);
  require(std::fflush(file.get()) == 0, ErrorCode::kIo, "cannot flush " + path.string());
}

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
  Decoded d = read(path, Layout::kRgb);
  return RgbImage(d.width, d.height, std::move(d.samples));
}

GrayImage read_png_gray(const std::filesystem::path& path) {
  // Gray sources are replicated to (v, v, v), which the luma weights map back to v.
  return to_grayscale(read_png_rgb(path));
}

IndexedImage read_png_indexed(const std::filesystem::path& path) {
  Decoded d = read(path, Layout::kIndexed);
  return IndexedImage{d.width, d.height, std::move(d.samples)};
}

void write_png_gray(const std::filesystem::path& path, const GrayImage& img) {
  std::vector<std::uint8_t> samples(img.size());
  auto src = img.pixels();
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = quantize_u8(src[i]);
  write(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY, samples, 1);
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& img) {
  std::vector<std::uint8_t> samples(img.bytes().begin(), img.bytes().end());
  write(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, samples, 3);
}

void write_png_indexed(const std::filesystem::path& path, const IndexedImage& img,
                       std::span<const PaletteEntry> palette) {
  require(!palette.empty() && palette.size() <= 256, ErrorCode::kInvalidInput,
          "palette must hold 1 to 256 entries");
  for (const std::uint8_t index : img.indices) {
    require(index < palette.size(), ErrorCode::kInvalidInput, "index outside the palette");
  }
  write(path, img.width, img.height, PNG_COLOR_TYPE_PALETTE, img.indices, 1, palette);
}

}  // namespace wrinklemap
