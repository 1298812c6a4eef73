#include "instyle/stretching.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace instyle {
namespace {

constexpr double kPlaceholder = std::numeric_limits<double>::quiet_NaN();

std::vector<Index> masked_columns(const BinaryMask& mask, Index row, const PackingBox& box) {
  std::vector<Index> cols;
  for (Index col = box.a; col <= box.b; ++col) {
    if (mask(row, col)) cols.push_back(col);
  }
  return cols;
}

// Nearest occupied row to `row`; on a tie the upper (smaller index) row wins.
Index nearest_occupied(const std::vector<bool>& occupied, Index row) {
  const Index n = static_cast<Index>(occupied.size());
  for (Index offset = 1; offset < n; ++offset) {
    if (row - offset >= 0 && occupied[static_cast<std::size_t>(row - offset)]) return row - offset;
    if (row + offset < n && occupied[static_cast<std::size_t>(row + offset)]) return row + offset;
  }
  throw Error(ErrorKind::Internal, "packing box has no occupied row");
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedRecord, what); }

}  // namespace

double lerp(double x0, double g0, double x1, double g1, double x) {
  if (x0 == x1) {
    throw Error(ErrorKind::DegenerateInterval, "lerp over a zero-width interval");
  }
  return g0 + (g1 - g0) / (x1 - x0) * (x - x0);
}

std::vector<Index> slot_positions(Index a, Index b, Index n) {
  if (a > b) throw Error(ErrorKind::InvalidArgument, "slot_positions: a > b");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "slot_positions: n must be >= 1");
  if (n > b - a + 1) {
    throw Error(ErrorKind::TooManyPixels, std::to_string(n) + " pixels do not fit in " +
                                              std::to_string(b - a + 1) + " columns");
  }
  if (n == 1) return {a};
  std::vector<Index> slots(static_cast<std::size_t>(n));
  // Numerator formed before the division; all terms are non-negative so
  // integer division is the floor.
  for (Index k = 0; k < n; ++k) slots[static_cast<std::size_t>(k)] = a + k * (b - a) / (n - 1);
  return slots;
}

void validate(const StretchRecord& record) {
  const PackingBox& box = record.box;
  if (record.image_height < 1 || record.image_width < 1) malformed("image dims must be positive");
  if (box.a < 0 || box.a > box.b || box.b >= record.image_width || box.c < 0 || box.c > box.d ||
      box.d >= record.image_height) {
    malformed("packing box outside image");
  }
  if (static_cast<Index>(record.rows.size()) != box.height()) {
    malformed("row count " + std::to_string(record.rows.size()) + " differs from box height " +
              std::to_string(box.height()));
  }
  bool any_occupied = false;
  for (std::size_t r = 0; r < record.rows.size(); ++r) {
    if (const auto* occ = std::get_if<OccupiedRow>(&record.rows[r])) {
      any_occupied = true;
      const auto n = occ->original_cols.size();
      if (n == 0 || occ->slot_cols.size() != n) malformed("row " + std::to_string(r) + ": bad column lists");
      for (std::size_t k = 0; k < n; ++k) {
        const Index orig = occ->original_cols[k];
        const Index slot = occ->slot_cols[k];
        if (orig < box.a || orig > box.b || slot < box.a || slot > box.b) {
          malformed("row " + std::to_string(r) + ": column outside packing box");
        }
        if (k > 0 && (orig <= occ->original_cols[k - 1] || slot <= occ->slot_cols[k - 1])) {
          malformed("row " + std::to_string(r) + ": columns not strictly increasing");
        }
      }
      if (occ->slot_cols.front() != box.a || (n >= 2 && occ->slot_cols.back() != box.b)) {
        malformed("row " + std::to_string(r) + ": slots do not span the packing box");
      }
    }
  }
  if (!any_occupied) malformed("record has no occupied row");
  for (std::size_t r = 0; r < record.rows.size(); ++r) {
    if (const auto* empty = std::get_if<EmptyRow>(&record.rows[r])) {
      const Index src = empty->fill_source_row;
      if (src < 0 || src >= static_cast<Index>(record.rows.size()) ||
          !std::holds_alternative<OccupiedRow>(record.rows[static_cast<std::size_t>(src)])) {
        malformed("row " + std::to_string(r) + ": fill_source_row is not an occupied row");
      }
    }
  }
}

ForwardStretchResult forward_stretch(const ImageTensor& image, const BinaryMask& mask) {
  if (image.height() != mask.height() || image.width() != mask.width()) {
    throw Error(ErrorKind::DimensionMismatch,
                "image is " + std::to_string(image.height()) + "x" + std::to_string(image.width()) +
                    " but mask is " + std::to_string(mask.height()) + "x" + std::to_string(mask.width()));
  }
  const PackingBox box = bounding_box(mask);
  const Index rows = box.height();
  const Index cols = box.width();
  const Index channels = image.channels();

  ForwardStretchResult result{StretchedInstance{ImageTensor(rows, cols, channels, kPlaceholder)},
                              StretchRecord{box, image.height(), image.width(), {}}};
  ImageTensor& out = result.instance.tensor;
  auto& records = result.record.rows;
  records.reserve(static_cast<std::size_t>(rows));

  std::vector<bool> occupied(static_cast<std::size_t>(rows), false);
  for (Index r = 0; r < rows; ++r) {
    std::vector<Index> original = masked_columns(mask, box.c + r, box);
    if (original.empty()) {
      records.emplace_back(EmptyRow{});
      continue;
    }
    occupied[static_cast<std::size_t>(r)] = true;
    const Index n = static_cast<Index>(original.size());
    std::vector<Index> slots = slot_positions(box.a, box.b, n);

    for (Index ch = 0; ch < channels; ++ch) {
      auto& plane = out.plane(ch);
      const auto& src = image.plane(ch);
      if (n == 1) {
        plane.row(r).setConstant(src(box.c + r, original.front()));
        continue;
      }
      for (Index k = 0; k < n; ++k) {
        plane(r, slots[k] - box.a) = src(box.c + r, original[k]);
      }
      for (Index k = 0; k + 1 < n; ++k) {
        const Index left = slots[k] - box.a;
        const Index right = slots[k + 1] - box.a;
        const double g0 = plane(r, left);
        const double g1 = plane(r, right);
        for (Index x = left + 1; x < right; ++x) {
          plane(r, x) = lerp(static_cast<double>(left), g0, static_cast<double>(right), g1,
                             static_cast<double>(x));
        }
      }
    }
    records.emplace_back(OccupiedRow{std::move(original), std::move(slots)});
  }

  for (Index r = 0; r < rows; ++r) {
    if (occupied[static_cast<std::size_t>(r)]) continue;
    const Index src = nearest_occupied(occupied, r);
    records[static_cast<std::size_t>(r)] = EmptyRow{src};
    for (Index ch = 0; ch < channels; ++ch) out.plane(ch).row(r) = out.plane(ch).row(src);
  }

  if (!out.all_finite()) {
    throw Error(ErrorKind::Internal, "placeholder survived forward stretching");
  }
  return result;
}

ImageTensor backward_stretch(const StretchedInstance& object, const StretchRecord& record) {
  validate(record);
  const ImageTensor& in = object.tensor;
  if (in.height() != record.box.height() || in.width() != record.box.width()) {
    throw Error(ErrorKind::ShapeMismatch,
                "stretched instance is " + std::to_string(in.height()) + "x" + std::to_string(in.width()) +
                    " but record expects " + std::to_string(record.box.height()) + "x" +
                    std::to_string(record.box.width()));
  }
  ImageTensor out(record.image_height, record.image_width, in.channels(), 0.0);
  for (std::size_t r = 0; r < record.rows.size(); ++r) {
    const auto* occ = std::get_if<OccupiedRow>(&record.rows[r]);
    if (!occ) continue;
    const Index row = static_cast<Index>(r);
    for (Index ch = 0; ch < in.channels(); ++ch) {
      for (std::size_t k = 0; k < occ->original_cols.size(); ++k) {
        out(record.box.c + row, occ->original_cols[k], ch) = in(row, occ->slot_cols[k] - record.box.a, ch);
      }
    }
  }
  return out;
}

}  // namespace instyle
