#include "harness/corpus.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "core/error.hpp"

namespace captem::harness {

using nlohmann::json;

namespace {

template <typename Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw InputParseError(path.string(), lineno, "not a JSON object");
    }
    fn(j, lineno);
  }
}

double number_at(const json& arr, std::size_t i, const std::string& path, std::size_t line,
                 const char* what) {
  if (!arr.is_array() || i >= arr.size() || !arr[i].is_number()) {
    throw InputParseError(path, line, fmt::format("'{}' must be a numeric array", what));
  }
  return arr[i].get<double>();
}

}  // namespace

std::vector<TextRecord> read_text_jsonl(const std::filesystem::path& path,
                                        const std::string& field, bool allow_empty) {
  std::vector<TextRecord> out;
  std::set<std::string> ids;
  const std::string p = path.string();
  for_each_json_line(path, [&](const json& j, std::size_t line) {
    const auto id = j.find("id");
    if (id == j.end() || !id->is_string()) throw InputParseError(p, line, "missing string 'id'");
    const auto text = j.find(field);
    if (text == j.end() || !text->is_string()) {
      throw InputParseError(p, line, fmt::format("missing string '{}'", field));
    }
    if (!allow_empty && text->get_ref<const std::string&>().find_first_not_of(" \t\r\n") ==
                            std::string::npos) {
      throw InputParseError(p, line, fmt::format("'{}' must be non-empty", field));
    }
    if (!ids.insert(id->get<std::string>()).second) {
      throw InputParseError(p, line, fmt::format("duplicate id '{}'", id->get<std::string>()));
    }
    out.push_back({id->get<std::string>(), text->get<std::string>(), line});
  });
  return out;
}

std::vector<CaptionPair> join_pairs(const std::vector<TextRecord>& predictions,
                                    const std::vector<TextRecord>& references) {
  std::map<std::string, const TextRecord*> by_id;
  for (const auto& r : references) by_id.emplace(r.id, &r);

  std::vector<std::string> missing;
  std::vector<CaptionPair> pairs;
  for (const auto& p : predictions) {
    const auto it = by_id.find(p.id);
    if (it == by_id.end()) {
      missing.push_back(p.id);
      continue;
    }
    pairs.push_back({p.id, p.text, it->second->text});
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kMissingReference,
                fmt::format("no reference for id(s): {}", fmt::join(missing, ", ")));
  }
  return pairs;
}

std::vector<face::Detection> read_detections_jsonl(const std::filesystem::path& path) {
  std::vector<face::Detection> out;
  const std::string p = path.string();
  for_each_json_line(path, [&](const json& j, std::size_t line) {
    face::Detection d;
    const auto fi = j.find("frame_idx");
    if (fi == j.end() || !fi->is_number_integer() || fi->get<long long>() < 0) {
      throw InputParseError(p, line, "'frame_idx' must be a nonnegative integer");
    }
    d.frame_idx = fi->get<std::size_t>();

    const json bbox = j.value("bbox", json());
    if (!bbox.is_array() || bbox.size() != 4) {
      throw InputParseError(p, line, "'bbox' must be [x, y, w, h]");
    }
    d.bbox = {number_at(bbox, 0, p, line, "bbox"), number_at(bbox, 1, p, line, "bbox"),
              number_at(bbox, 2, p, line, "bbox"), number_at(bbox, 3, p, line, "bbox")};
    const json size = j.value("frame_size", json());
    if (!size.is_array() || size.size() != 2) {
      throw InputParseError(p, line, "'frame_size' must be [width, height]");
    }
    d.frame_size = {number_at(size, 0, p, line, "frame_size"),
                    number_at(size, 1, p, line, "frame_size")};

    if (!(d.frame_size.width > 0 && d.frame_size.height > 0)) {
      throw InputParseError(p, line, "frame_size must be positive");
    }
    if (!(d.bbox.w > 0 && d.bbox.h > 0)) throw InputParseError(p, line, "bbox w, h must be > 0");
    if (d.bbox.x < 0 || d.bbox.y < 0 || d.bbox.x + d.bbox.w > d.frame_size.width ||
        d.bbox.y + d.bbox.h > d.frame_size.height) {
      throw InputParseError(p, line, "bbox lies outside the frame");
    }

    const json emb = j.value("embedding", json());
    if (!emb.is_array() || emb.empty()) {
      throw InputParseError(p, line, "'embedding' must be a non-empty numeric array");
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < emb.size(); ++i) {
      d.embedding.push_back(number_at(emb, i, p, line, "embedding"));
      norm2 += d.embedding.back() * d.embedding.back();
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) {
      throw InputParseError(p, line, fmt::format("embedding norm {} is not 1", std::sqrt(norm2)));
    }
    if (!out.empty() && out.front().embedding.size() != d.embedding.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("{}:{}: embedding has {} dims, expected {}", p, line,
                              d.embedding.size(), out.front().embedding.size()));
    }

    const auto conf = j.find("confidence");
    if (conf == j.end() || !conf->is_number()) {
      throw InputParseError(p, line, "'confidence' must be a number");
    }
    d.confidence = conf->get<double>();
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      throw InputParseError(p, line, "confidence must lie in [0, 1]");
    }
    out.push_back(std::move(d));
  });
  return out;
}

}  // namespace captem::harness
