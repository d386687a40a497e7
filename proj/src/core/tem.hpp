#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace captem {

/// An atomic facial-action clause extracted from a caption. `ordinal` is the
/// clause's position of appearance within its source text.
struct Event {
  std::size_t ordinal = 0;
  std::string text;

  bool operator==(const Event&) const = default;
};

enum class SourceRole { kGenerated, kReference };

/// Events in appearance order. Ordinals are 0..size()-1; duplicates are kept.
class EventSequence {
 public:
  explicit EventSequence(SourceRole role = SourceRole::kGenerated) : role_(role) {}

  /// Builds a sequence from clause texts, assigning ordinals in order.
  /// Throws Error(kInvalidArgument) on an empty clause.
  static EventSequence from_texts(const std::vector<std::string>& texts, SourceRole role);

  void push_back(std::string text);

  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  SourceRole role() const noexcept { return role_; }

 private:
  std::vector<Event> events_;
  SourceRole role_;
};

// Numeric values mirror CAPTEM_REL_* in include/captem.h.
enum class RelationLabel : std::uint8_t {
  kNoRelation = 0,
  kSameMeaning = 1,
  kOppositeMeaning = 2,
};

std::string_view relation_name(RelationLabel label) noexcept;
/// Parses "SameMeaning"/"same"/"OppositeMeaning"/"opposite"/"NoRelation"/"none"
/// (case-insensitive). Returns false if unrecognised.
bool parse_relation(std::string_view text, RelationLabel& out) noexcept;

/// m x n grid of relation labels between generated (rows) and reference
/// (columns) events. Every cell is populated; default is NoRelation.
class MatchMatrix {
 public:
  MatchMatrix() = default;
  MatchMatrix(std::size_t rows, std::size_t cols,
              RelationLabel fill = RelationLabel::kNoRelation)
      : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  RelationLabel at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, RelationLabel label) { cells_[i * cols_ + j] = label; }

  bool same(std::size_t i, std::size_t j) const {
    return at(i, j) == RelationLabel::kSameMeaning;
  }

  bool operator==(const MatchMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RelationLabel> cells_;
};

struct EventFMeasure {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

struct TemScore {
  std::size_t lcs_length = 0;
  double lcs_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  /// (lcs_score + f_measure) / 2
  double combined = 0.0;
};

// Only SameMeaning counts as a match; OppositeMeaning behaves like NoRelation.
// Any ratio with a zero denominator is 0.

/// Longest chain of SameMeaning cells strictly increasing in both row and column.
std::size_t lcs_match_length(const MatchMatrix& match);

/// lcs_match_length / rows (normalised by the number of generated events).
double lcs_score(const MatchMatrix& match);

/// Precision over generated events with any SameMeaning partner, recall over
/// reference events with any SameMeaning partner, harmonic mean.
EventFMeasure event_f_measure(const MatchMatrix& match);

TemScore tem_score(const MatchMatrix& match);

}  // namespace captem
