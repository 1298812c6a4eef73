#include "instyle/image.hpp"

#include <string>

namespace instyle {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return "IoError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::EmptyMask: return "EmptyMask";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::DegenerateInterval: return "DegenerateInterval";
    case ErrorKind::TooManyPixels: return "TooManyPixels";
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorKind::DegenerateFeatures: return "DegenerateFeatures";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Internal: return "InternalError";
  }
  return "UnknownError";
}

PackingBox bounding_box(const BinaryMask& mask) {
  if (mask.popcount() == 0) {
    throw Error(ErrorKind::EmptyMask, "mask has no true pixels");
  }
  PackingBox box{mask.width(), -1, mask.height(), -1};
  for (Index col = 0; col < mask.width(); ++col) {
    for (Index row = 0; row < mask.height(); ++row) {
      if (!mask(row, col)) continue;
      box.a = std::min(box.a, col);
      box.b = std::max(box.b, col);
      box.c = std::min(box.c, row);
      box.d = std::max(box.d, row);
    }
  }
  return box;
}

ImageTensor crop(const ImageTensor& image, const PackingBox& box) {
  if (box.a < 0 || box.c < 0 || box.a > box.b || box.c > box.d || box.b >= image.width() ||
      box.d >= image.height()) {
    throw Error(ErrorKind::OutOfBounds,
                "crop box [" + std::to_string(box.a) + "," + std::to_string(box.b) + "]x[" +
                    std::to_string(box.c) + "," + std::to_string(box.d) +
                    "] outside image " + std::to_string(image.height()) + "x" +
                    std::to_string(image.width()));
  }
  std::vector<ImageTensor::Plane> planes;
  planes.reserve(static_cast<std::size_t>(image.channels()));
  for (const auto& p : image.planes()) {
    planes.emplace_back(p.block(box.c, box.a, box.height(), box.width()));
  }
  return ImageTensor(std::move(planes));
}

}  // namespace instyle
