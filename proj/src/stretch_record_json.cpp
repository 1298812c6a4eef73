#include "instyle/stretch_record_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace instyle {
namespace {

using nlohmann::json;

Index get_index(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorKind::MalformedRecord, std::string("'") + key + "' must be an integer");
  }
  return v.get<Index>();
}

std::vector<Index> get_index_list(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw Error(ErrorKind::MalformedRecord, std::string("'") + key + "' must be an array");
  std::vector<Index> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number_integer()) {
      throw Error(ErrorKind::MalformedRecord, std::string("'") + key + "' entries must be integers");
    }
    out.push_back(e.get<Index>());
  }
  return out;
}

}  // namespace

std::string to_json(const StretchRecord& record) {
  json rows = json::array();
  for (const auto& row : record.rows) {
    if (const auto* occ = std::get_if<OccupiedRow>(&row)) {
      rows.push_back({{"kind", "occupied"}, {"original_cols", occ->original_cols}, {"slot_cols", occ->slot_cols}});
    } else {
      rows.push_back({{"kind", "empty"}, {"fill_source_row", std::get<EmptyRow>(row).fill_source_row}});
    }
  }
  json doc = {
      {"box", {{"a", record.box.a}, {"b", record.box.b}, {"c", record.box.c}, {"d", record.box.d}}},
      {"image_height", record.image_height},
      {"image_width", record.image_width},
      {"rows", std::move(rows)},
  };
  return doc.dump(1) + "\n";
}

StretchRecord record_from_json(const std::string& text) {
  StretchRecord record;
  try {
    const json doc = json::parse(text);
    const json& box = doc.at("box");
    record.box = {get_index(box, "a"), get_index(box, "b"), get_index(box, "c"), get_index(box, "d")};
    record.image_height = get_index(doc, "image_height");
    record.image_width = get_index(doc, "image_width");
    const json& rows = doc.at("rows");
    if (!rows.is_array()) throw Error(ErrorKind::MalformedRecord, "'rows' must be an array");
    for (const json& row : rows) {
      const std::string kind = row.at("kind").get<std::string>();
      if (kind == "occupied") {
        record.rows.emplace_back(OccupiedRow{get_index_list(row, "original_cols"), get_index_list(row, "slot_cols")});
      } else if (kind == "empty") {
        record.rows.emplace_back(EmptyRow{get_index(row, "fill_source_row")});
      } else {
        throw Error(ErrorKind::MalformedRecord, "unknown row kind '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedRecord, e.what());
  }
  validate(record);
  return record;
}

void save_record(const StretchRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << to_json(record);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
}

StretchRecord load_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return record_from_json(buf.str());
}

}  // namespace instyle
