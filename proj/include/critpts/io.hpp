#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "critpts/dataset.hpp"
#include "critpts/error.hpp"
#include "critpts/index_set.hpp"

// JSON encodings for datasets and index sets. The other modules add their own
// to_json overloads next to their types.

namespace critpts {

using json = nlohmann::json;

inline json to_json(const IndexSet& s) { return json(s.values()); }

inline IndexSet index_set_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "index set must be a JSON array");
  std::vector<Index> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw Error(ErrorCode::ParseError, "index set entries must be nonnegative integers");
    out.push_back(v.get<Index>());
  }
  return IndexSet(std::move(out));
}

/// {"dim": n, "points": [["1.5", "2"], ...], "labels": [1, -1, ...]}
inline json to_json(const LabeledDataset& d) {
  json pts = json::array();
  for (const auto& p : d.points()) {
    json row = json::array();
    for (const auto& c : p) row.push_back(format_rational(c));
    pts.push_back(std::move(row));
  }
  json labels = json::array();
  for (auto l : d.labels()) labels.push_back(sign_of(l));
  return json{{"dim", d.dim()}, {"points", std::move(pts)}, {"labels", std::move(labels)}};
}

inline Rational coordinate_from_json(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) return parse_rational(v.dump());
  throw Error(ErrorCode::ParseError, "coordinate must be a decimal string or number");
}

inline LabeledDataset dataset_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("points") || !j.contains("labels"))
      throw Error(ErrorCode::ParseError, "dataset needs \"points\" and \"labels\"");
    std::vector<Point> pts;
    for (const auto& row : j.at("points")) {
      if (!row.is_array()) throw Error(ErrorCode::ParseError, "each point must be an array");
      Point p;
      for (const auto& v : row) p.push_back(coordinate_from_json(v));
      pts.push_back(std::move(p));
    }
    std::vector<Label> labels;
    for (const auto& v : j.at("labels")) {
      if (!v.is_number_integer()) throw Error(ErrorCode::ParseError, "labels must be 1 or -1");
      labels.push_back(label_from_int(v.get<int>()));
    }
    LabeledDataset d(std::move(pts), std::move(labels));
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != d.dim())
      throw Error(ErrorCode::DimensionMismatch, "\"dim\" does not match the point coordinates");
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline LabeledDataset load_dataset(const std::string& path) { return dataset_from_json(read_json_file(path)); }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidParams, "cannot write " + path);
  out << text;
}

/// Canonical file form: two-space indentation plus trailing newline.
inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace critpts
