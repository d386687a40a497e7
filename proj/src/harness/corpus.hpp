#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "face/trajectory.hpp"

namespace captem::harness {

struct CaptionPair {
  std::string id;
  std::string prediction;
  std::string reference;
};

struct TextRecord {
  std::string id;
  std::string text;
  std::size_t line = 0;
};

/// Reads JSONL objects {"id": ..., "<field>": ...}. Blank lines are skipped.
/// Throws InputParseError (with line number) on bad JSON, missing or
/// non-string fields, duplicate ids and (unless `allow_empty`) empty text;
/// kIo if the file cannot be read.
std::vector<TextRecord> read_text_jsonl(const std::filesystem::path& path,
                                        const std::string& field, bool allow_empty = true);

/// Joins predictions with references in prediction order. Throws
/// Error(kMissingReference) listing every prediction id without a reference.
std::vector<CaptionPair> join_pairs(const std::vector<TextRecord>& predictions,
                                    const std::vector<TextRecord>& references);

/// One detection per line: {frame_idx, bbox:[x,y,w,h], frame_size:[w,h],
/// embedding:[...], confidence}. Validates box bounds, unit-norm embedding
/// (1e-6) and confidence range; throws InputParseError. Mixed embedding sizes
/// throw Error(kDimensionMismatch).
std::vector<face::Detection> read_detections_jsonl(const std::filesystem::path& path);

}  // namespace captem::harness
