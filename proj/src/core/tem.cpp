#include "core/tem.hpp"

#include <algorithm>
#include <cctype>

#include "core/error.hpp"

namespace captem {

EventSequence EventSequence::from_texts(const std::vector<std::string>& texts,
                                        SourceRole role) {
  EventSequence seq(role);
  for (const auto& t : texts) seq.push_back(t);
  return seq;
}

void EventSequence::push_back(std::string text) {
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; });
  if (blank) throw Error(ErrorCode::kInvalidArgument, "event text must be non-empty");
  events_.push_back(Event{events_.size(), std::move(text)});
}

std::string_view relation_name(RelationLabel label) noexcept {
  switch (label) {
    case RelationLabel::kSameMeaning: return "SameMeaning";
    case RelationLabel::kOppositeMeaning: return "OppositeMeaning";
    case RelationLabel::kNoRelation: return "NoRelation";
  }
  return "NoRelation";
}

bool parse_relation(std::string_view text, RelationLabel& out) noexcept {
  std::string key;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc)) key.push_back(static_cast<char>(std::tolower(uc)));
  }
  if (key == "samemeaning" || key == "same") {
    out = RelationLabel::kSameMeaning;
  } else if (key == "oppositemeaning" || key == "opposite") {
    out = RelationLabel::kOppositeMeaning;
  } else if (key == "norelation" || key == "none" || key == "unrelated") {
    out = RelationLabel::kNoRelation;
  } else {
    return false;
  }
  return true;
}

std::size_t lcs_match_length(const MatchMatrix& match) {
  const std::size_t m = match.rows();
  const std::size_t n = match.cols();
  if (m == 0 || n == 0) return 0;

  // Two rolling rows of the (m+1) x (n+1) table.
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      if (match.same(i - 1, j - 1)) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double lcs_score(const MatchMatrix& match) {
  if (match.rows() == 0) return 0.0;
  return static_cast<double>(lcs_match_length(match)) / static_cast<double>(match.rows());
}

EventFMeasure event_f_measure(const MatchMatrix& match) {
  const std::size_t m = match.rows();
  const std::size_t n = match.cols();
  std::vector<bool> row_hit(m, false), col_hit(n, false);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (match.same(i, j)) {
        row_hit[i] = true;
        col_hit[j] = true;
      }
    }
  }
  const auto hits = [](const std::vector<bool>& v) {
    return static_cast<double>(std::count(v.begin(), v.end(), true));
  };

  EventFMeasure out;
  out.precision = m == 0 ? 0.0 : hits(row_hit) / static_cast<double>(m);
  out.recall = n == 0 ? 0.0 : hits(col_hit) / static_cast<double>(n);
  const double denom = out.precision + out.recall;
  out.f_measure = denom == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / denom;
  return out;
}

TemScore tem_score(const MatchMatrix& match) {
  TemScore s;
  s.lcs_length = lcs_match_length(match);
  s.lcs_score = match.rows() == 0
                    ? 0.0
                    : static_cast<double>(s.lcs_length) / static_cast<double>(match.rows());
  const EventFMeasure f = event_f_measure(match);
  s.precision = f.precision;
  s.recall = f.recall;
  s.f_measure = f.f_measure;
  s.combined = (s.lcs_score + s.f_measure) / 2.0;
  return s;
}

}  // namespace captem
