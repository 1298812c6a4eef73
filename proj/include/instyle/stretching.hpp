#pragma once

#include <variant>
#include <vector>

#include "instyle/image.hpp"

namespace instyle {

/// Eq.-style linear interpolation between (x0, g0) and (x1, g1).
/// Throws DegenerateInterval when x0 == x1.
double lerp(double x0, double g0, double x1, double g1, double x);

/// Columns that n row pixels are placed on when stretched across [a, b]:
/// floor(a + k (b - a) / (n - 1)) for k = 0..n-1, or just {a} when n == 1.
std::vector<Index> slot_positions(Index a, Index b, Index n);

struct OccupiedRow {
  std::vector<Index> original_cols;  // absolute, strictly increasing
  std::vector<Index> slot_cols;      // absolute, within [a, b]

  friend bool operator==(const OccupiedRow&, const OccupiedRow&) = default;
};

struct EmptyRow {
  Index fill_source_row = 0;  // index into StretchRecord::rows, always occupied

  friend bool operator==(const EmptyRow&, const EmptyRow&) = default;
};

using RowRecord = std::variant<OccupiedRow, EmptyRow>;

/// Everything Backward Stretching needs to send placed samples home.
struct StretchRecord {
  PackingBox box;
  Index image_height = 0;
  Index image_width = 0;
  std::vector<RowRecord> rows;  // one per packing-box row, top to bottom

  friend bool operator==(const StretchRecord&, const StretchRecord&) = default;
};

/// Throws MalformedRecord if the record is internally inconsistent.
void validate(const StretchRecord& record);

struct StretchedInstance {
  ImageTensor tensor;  // P_h x P_w x C
};

struct ForwardStretchResult {
  StretchedInstance instance;
  StretchRecord record;
};

ForwardStretchResult forward_stretch(const ImageTensor& image, const BinaryMask& mask);

/// Inverse of forward_stretch: drops interpolated samples, returns placed
/// samples to their original columns and zero-pads to the content size.
ImageTensor backward_stretch(const StretchedInstance& object, const StretchRecord& record);

}  // namespace instyle
