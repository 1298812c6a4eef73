#pragma once

#include <filesystem>
#include <string>

#include "instyle/stretching.hpp"

namespace instyle {

// record.json layout:
//   { "box": {"a":..,"b":..,"c":..,"d":..}, "image_height": H, "image_width": W,
//     "rows": [ {"kind":"occupied","original_cols":[..],"slot_cols":[..]},
//               {"kind":"empty","fill_source_row":k}, ... ] }
// fill_source_row indexes the rows array (packing-box relative).

std::string to_json(const StretchRecord& record);

/// Throws MalformedRecord on syntax errors, missing keys or invalid content.
StretchRecord record_from_json(const std::string& text);

void save_record(const StretchRecord& record, const std::filesystem::path& path);
StretchRecord load_record(const std::filesystem::path& path);

}  // namespace instyle
