#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/tem.hpp"

namespace captem::semantic {

/// Video-caption judge scores, each in [1, 5].
struct JudgeScores {
  double correctness = 1.0;
  double detail = 1.0;
  double context = 1.0;
  double temporal = 1.0;

  bool operator==(const JudgeScores&) const = default;
};

struct TemplateVersion {
  std::string name;
  int version = 0;
};

/// Every LLM-dependent step of the evaluation. Implementations must be safe to
/// call concurrently and must return identical outputs for identical inputs
/// (given identical cache state). Failures throw captem::Error.
class SemanticBackend {
 public:
  virtual ~SemanticBackend() = default;

  virtual std::string identity() const = 0;
  virtual std::vector<TemplateVersion> template_versions() const = 0;

  virtual EventSequence extract_events(std::string_view text, SourceRole role) const = 0;
  virtual MatchMatrix classify_relations(const EventSequence& gen,
                                         const EventSequence& ref) const = 0;
  virtual std::string align_format(std::string_view generated,
                                   std::string_view reference) const = 0;
  virtual JudgeScores judge_scores(std::string_view generated,
                                   std::string_view reference) const = 0;
};

}  // namespace captem::semantic
