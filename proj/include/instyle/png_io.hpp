#pragma once

#include <cstdint>
#include <filesystem>

#include "instyle/image.hpp"

namespace instyle {

// 8-bit grayscale, gray+alpha, RGB and RGBA PNGs are accepted. Alpha is
// dropped and grayscale is replicated into three channels. Each byte v
// becomes v / 255.
ImageTensor load_image(const std::filesystem::path& path);

// Clamps to [0,1] and writes 8-bit RGB using round-half-up on v * 255.
// Requires exactly three channels.
void save_image(const ImageTensor& image, const std::filesystem::path& path);

// A pixel is set iff its luma byte is >= threshold. Grayscale inputs use
// the gray byte; colour inputs use round(0.299 R + 0.587 G + 0.114 B).
BinaryMask load_mask(const std::filesystem::path& path, std::uint8_t threshold = 128);

// Writes a mask as 8-bit grayscale (0 / 255). Used for fixtures and dumps.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

std::uint8_t quantize_sample(double v) noexcept;

}  // namespace instyle
