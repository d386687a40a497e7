#pragma once

#include <set>
#include <string>

#include "semantic/backend.hpp"

namespace captem::semantic {

/// Deterministic offline stand-in for the LLM. Not an authoritative judge.
///
/// extract_events: split on '.', '!', '?' and on the connective "then"
///   (a directly preceding "and" is dropped); each clause is tokenized and
///   re-joined with single spaces; empty clauses are skipped.
/// classify_relations: on normalized token sets, if swapping the words of one
///   antonym pair in the generated clause raises the Jaccard to >= 0.3 it is
///   OppositeMeaning; otherwise Jaccard >= 0.6 is SameMeaning; otherwise
///   NoRelation.
/// align_format: identity.
/// judge_scores: 1 + 4 * overlap, with overlap per criterion being token
///   precision (correctness), recall (detail), unigram F1 (context) and
///   ROUGE-L F1 (temporal). Identical texts score 5, disjoint texts 1.
class MockBackend final : public SemanticBackend {
 public:
  static constexpr double kSameThreshold = 0.6;
  static constexpr double kOppositeThreshold = 0.3;

  std::string identity() const override { return "mock/1"; }
  std::vector<TemplateVersion> template_versions() const override { return {}; }

  EventSequence extract_events(std::string_view text, SourceRole role) const override;
  MatchMatrix classify_relations(const EventSequence& gen,
                                 const EventSequence& ref) const override;
  std::string align_format(std::string_view generated,
                           std::string_view reference) const override;
  JudgeScores judge_scores(std::string_view generated,
                           std::string_view reference) const override;

  /// Pairwise rule behind classify_relations.
  static RelationLabel relate(const std::string& gen_event, const std::string& ref_event);
  static double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);
};

}  // namespace captem::semantic
