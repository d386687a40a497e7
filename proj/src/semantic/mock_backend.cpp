#include "semantic/mock_backend.hpp"

#include <array>
#include <map>

#include "ngram/ngram.hpp"

namespace captem::semantic {

namespace {

struct AntonymPair {
  std::array<const char*, 4> left;
  std::array<const char*, 4> right;
};

// Same inflection slot on both sides: base, 3rd person, past, gerund.
constexpr std::array<AntonymPair, 5> kAntonyms{{
    {{"smile", "smiles", "smiled", "smiling"}, {"frown", "frowns", "frowned", "frowning"}},
    {{"open", "opens", "opened", "opening"}, {"close", "closes", "closed", "closing"}},
    {{"raise", "raises", "raised", "raising"}, {"lower", "lowers", "lowered", "lowering"}},
    {{"widen", "widens", "widened", "widening"},
     {"narrow", "narrows", "narrowed", "narrowing"}},
    {{"up", "up", "up", "up"}, {"down", "down", "down", "down"}},
}};

std::set<std::string> token_set(const std::string& text) {
  const auto toks = ngram::tokenize(text);
  return {toks.tokens().begin(), toks.tokens().end()};
}

std::string swap_word(const std::string& w, const AntonymPair& pair) {
  for (std::size_t k = 0; k < pair.left.size(); ++k) {
    if (w == pair.left[k]) return pair.right[k];
    if (w == pair.right[k]) return pair.left[k];
  }
  return w;
}

bool is_sentence_end(char c) { return c == '.' || c == '!' || c == '?'; }

std::size_t bag_overlap(const ngram::TokenSequence& a, const ngram::TokenSequence& b) {
  std::map<std::string, int> counts;
  for (const auto& t : b.tokens()) ++counts[t];
  std::size_t hit = 0;
  for (const auto& t : a.tokens()) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++hit;
    }
  }
  return hit;
}

}  // namespace

double MockBackend::jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& t : a) inter += b.count(t);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

RelationLabel MockBackend::relate(const std::string& gen_event, const std::string& ref_event) {
  const auto g = token_set(gen_event);
  const auto r = token_set(ref_event);
  const double base = jaccard(g, r);

  // Swapping is an involution applied to one side, so J(swap(g), r) equals
  // J(g, swap(r)) and the rule stays symmetric.
  for (const auto& pair : kAntonyms) {
    std::set<std::string> swapped;
    for (const auto& t : g) swapped.insert(swap_word(t, pair));
    if (swapped == g) continue;
    const double j = jaccard(swapped, r);
    if (j >= kOppositeThreshold && j > base) return RelationLabel::kOppositeMeaning;
  }
  if (base >= kSameThreshold) return RelationLabel::kSameMeaning;
  return RelationLabel::kNoRelation;
}

EventSequence MockBackend::extract_events(std::string_view text, SourceRole role) const {
  EventSequence seq(role);
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && !is_sentence_end(text[i])) continue;
    const auto tokens = ngram::tokenize(text.substr(start, i - start)).tokens();
    start = i + 1;

    std::vector<std::string> clause;
    const auto flush = [&] {
      if (clause.empty()) return;
      std::string joined;
      for (const auto& t : clause) {
        if (!joined.empty()) joined.push_back(' ');
        joined += t;
      }
      seq.push_back(std::move(joined));
      clause.clear();
    };
    for (const auto& t : tokens) {
      if (t == "then") {
        if (!clause.empty() && clause.back() == "and") clause.pop_back();
        flush();
      } else {
        clause.push_back(t);
      }
    }
    flush();
  }
  return seq;
}

MatchMatrix MockBackend::classify_relations(const EventSequence& gen,
                                            const EventSequence& ref) const {
  MatchMatrix match(gen.size(), ref.size());
  for (std::size_t i = 0; i < gen.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      match.set(i, j, relate(gen[i].text, ref[j].text));
    }
  }
  return match;
}

std::string MockBackend::align_format(std::string_view generated, std::string_view) const {
  return std::string(generated);
}

JudgeScores MockBackend::judge_scores(std::string_view generated,
                                      std::string_view reference) const {
  const auto g = ngram::tokenize(generated);
  const auto r = ngram::tokenize(reference);
  if (g == r) return {5.0, 5.0, 5.0, 5.0};

  const double overlap = static_cast<double>(bag_overlap(g, r));
  const double p = g.empty() ? 0.0 : overlap / static_cast<double>(g.size());
  const double rc = r.empty() ? 0.0 : overlap / static_cast<double>(r.size());
  const double f1 = p + rc == 0.0 ? 0.0 : 2.0 * p * rc / (p + rc);
  const double lcs_f = ngram::rouge_l(g, r, 1.0);
  const auto scale = [](double x) { return 1.0 + 4.0 * x; };
  return {scale(p), scale(rc), scale(f1), scale(lcs_f)};
}

}  // namespace captem::semantic
