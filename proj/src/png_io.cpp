#include "instyle/png_io.hpp"

#include <png.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

namespace instyle {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string quoted(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

// Decoded 8-bit samples, interleaved, with 1..4 channels as stored.
struct RawPng {
  Index width = 0;
  Index height = 0;
  int channels = 0;
  bool has_alpha = false;
  std::vector<png_byte> bytes;

  png_byte at(Index row, Index col, int ch) const {
    return bytes[static_cast<std::size_t>((row * width + col) * channels + ch)];
  }
};

// libpng reports errors by longjmp; everything touched after setjmp lives
// in this struct so its state survives the jump.
struct ReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  char message[256] = {};
  ~ReadState() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* buf = static_cast<char*>(png_get_error_ptr(png));
  std::snprintf(buf, 256, "%s", msg);
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

RawPng read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw Error(ErrorKind::Io, "cannot open " + quoted(path) + ": " + std::strerror(errno));
  }
  png_byte signature[8] = {};
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorKind::Io, quoted(path) + " is not a PNG file");
  }

  ReadState state;
  state.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, state.message, on_png_error, on_png_warning);
  if (!state.png) throw Error(ErrorKind::Internal, "png_create_read_struct failed");
  state.info = png_create_info_struct(state.png);
  if (!state.info) throw Error(ErrorKind::Internal, "png_create_info_struct failed");

  RawPng raw;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(state.png))) {
    throw Error(ErrorKind::Io, "cannot decode " + quoted(path) + ": " + state.message);
  }
  png_init_io(state.png, file.get());
  png_set_sig_bytes(state.png, 8);
  png_read_info(state.png, state.info);

  const int bit_depth = png_get_bit_depth(state.png, state.info);
  const int color_type = png_get_color_type(state.png, state.info);
  if (bit_depth != 8) {
    throw Error(ErrorKind::UnsupportedFormat,
                quoted(path) + ": unsupported bit depth " + std::to_string(bit_depth) + " (need 8)");
  }
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: raw.channels = 1; break;
    case PNG_COLOR_TYPE_GRAY_ALPHA: raw.channels = 2; raw.has_alpha = true; break;
    case PNG_COLOR_TYPE_RGB: raw.channels = 3; break;
    case PNG_COLOR_TYPE_RGB_ALPHA: raw.channels = 4; raw.has_alpha = true; break;
    default:
      throw Error(ErrorKind::UnsupportedFormat,
                  quoted(path) + ": unsupported color type " + std::to_string(color_type) +
                      " (need gray, gray+alpha, RGB or RGBA)");
  }
  png_set_interlace_handling(state.png);
  png_read_update_info(state.png, state.info);

  raw.width = png_get_image_width(state.png, state.info);
  raw.height = png_get_image_height(state.png, state.info);
  const std::size_t stride = png_get_rowbytes(state.png, state.info);
  if (stride != static_cast<std::size_t>(raw.width * raw.channels)) {
    throw Error(ErrorKind::Internal, quoted(path) + ": unexpected row stride");
  }
  raw.bytes.resize(stride * static_cast<std::size_t>(raw.height));
  rows.resize(static_cast<std::size_t>(raw.height));
  for (Index r = 0; r < raw.height; ++r) {
    rows[static_cast<std::size_t>(r)] = raw.bytes.data() + static_cast<std::size_t>(r) * stride;
  }
  png_read_image(state.png, rows.data());
  png_read_end(state.png, nullptr);
  return raw;
}

struct WriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  char message[256] = {};
  ~WriteState() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

void write_png(const std::filesystem::path& path, Index width, Index height, int color_type,
               const std::vector<png_byte>& bytes, int channels) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw Error(ErrorKind::Io, "cannot write " + quoted(path) + ": " + std::strerror(errno));
  }
  WriteState state;
  state.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, state.message, on_png_error, on_png_warning);
  if (!state.png) throw Error(ErrorKind::Internal, "png_create_write_struct failed");
  state.info = png_create_info_struct(state.png);
  if (!state.info) throw Error(ErrorKind::Internal, "png_create_info_struct failed");

  std::vector<png_const_bytep> rows(static_cast<std::size_t>(height));
  for (Index r = 0; r < height; ++r) {
    rows[static_cast<std::size_t>(r)] = bytes.data() + static_cast<std::size_t>(r * width * channels);
  }
  if (setjmp(png_jmpbuf(state.png))) {
    throw Error(ErrorKind::Io, "cannot encode " + quoted(path) + ": " + state.message);
  }
  png_init_io(state.png, file.get());
  png_set_IHDR(state.png, state.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(state.png, state.info);
  png_write_image(state.png, const_cast<png_bytepp>(rows.data()));
  png_write_end(state.png, nullptr);

  if (std::fflush(file.get()) != 0) {
    throw Error(ErrorKind::Io, "cannot write " + quoted(path) + ": " + std::strerror(errno));
  }
}

}  // namespace

std::uint8_t quantize_sample(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

ImageTensor load_image(const std::filesystem::path& path) {
  const RawPng raw = read_png(path);
  ImageTensor image(raw.height, raw.width, 3);
  const int colour_channels = raw.channels >= 3 ? 3 : 1;
  for (Index row = 0; row < raw.height; ++row) {
    for (Index col = 0; col < raw.width; ++col) {
      for (int ch = 0; ch < 3; ++ch) {
        const int src = colour_channels == 3 ? ch : 0;
        image(row, col, ch) = static_cast<double>(raw.at(row, col, src)) / 255.0;
      }
    }
  }
  return image;
}

void save_image(const ImageTensor& image, const std::filesystem::path& path) {
  if (image.channels() != 3) {
    throw Error(ErrorKind::ShapeMismatch,
                "save_image needs 3 channels, got " + std::to_string(image.channels()));
  }
  std::vector<png_byte> bytes(static_cast<std::size_t>(image.height() * image.width() * 3));
  std::size_t i = 0;
  for (Index row = 0; row < image.height(); ++row) {
    for (Index col = 0; col < image.width(); ++col) {
      for (Index ch = 0; ch < 3; ++ch) bytes[i++] = quantize_sample(image(row, col, ch));
    }
  }
  write_png(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, bytes, 3);
}

BinaryMask load_mask(const std::filesystem::path& path, std::uint8_t threshold) {
  const RawPng raw = read_png(path);
  BinaryMask mask(raw.height, raw.width);
  for (Index row = 0; row < raw.height; ++row) {
    for (Index col = 0; col < raw.width; ++col) {
      int luma = 0;
      if (raw.channels >= 3) {
        // Rec.601 weights in thousandths, rounded half up.
        luma = (299 * raw.at(row, col, 0) + 587 * raw.at(row, col, 1) + 114 * raw.at(row, col, 2) + 500) / 1000;
      } else {
        luma = raw.at(row, col, 0);
      }
      mask(row, col) = luma >= threshold;
    }
  }
  return mask;
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<png_byte> bytes(static_cast<std::size_t>(mask.height() * mask.width()));
  std::size_t i = 0;
  for (Index row = 0; row < mask.height(); ++row) {
    for (Index col = 0; col < mask.width(); ++col) bytes[i++] = mask(row, col) ? 255 : 0;
  }
  write_png(path, mask.width(), mask.height(), PNG_COLOR_TYPE_GRAY, bytes, 1);
}

}  // namespace instyle
