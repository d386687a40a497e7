#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace captem::ngram {

inline constexpr int kMaxOrder = 4;
inline constexpr double kDefaultRougeBeta = 1.2;
inline constexpr double kDefaultCiderScale = 1.0;

/// Lowercase tokens with ASCII punctuation turned into separators. Only
/// `tokenize` produces these, so every metric sees one normalization.
class TokenSequence {
 public:
  TokenSequence() = default;

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }

  /// Tokens joined with single spaces.
  std::string joined() const;

  bool operator==(const TokenSequence&) const = default;

 private:
  friend TokenSequence tokenize(std::string_view text);
  std::vector<std::string> tokens_;
};

TokenSequence tokenize(std::string_view text);

/// n-gram key: tokens joined by a single space.
using NGramCounts = std::map<std::string, int>;

/// Counts for orders 1..4; index 0 holds unigrams.
struct NGramProfile {
  std::array<NGramCounts, kMaxOrder> orders;

  static NGramProfile of(const TokenSequence& tokens);
};

class IdfTable {
 public:
  /// Throws Error(kEmptyCorpus) when `reference_corpus` is empty.
  static IdfTable build(const std::vector<TokenSequence>& reference_corpus);

  std::size_t corpus_size() const noexcept { return corpus_size_; }

  /// Documents containing the n-gram; 0 if never seen.
  int doc_frequency(int order, const std::string& gram) const;

  /// log(corpus_size / max(1, doc_frequency)).
  double idf(int order, const std::string& gram) const;

 private:
  std::size_t corpus_size_ = 0;
  std::array<std::map<std::string, int>, kMaxOrder> doc_freq_;
};

/// Token-level LCS F-score: (1+b^2)PR / (R + b^2 P). beta must be > 0.
double rouge_l(const TokenSequence& gen, const TokenSequence& ref,
               double beta = kDefaultRougeBeta);

/// Token LCS length, exposed for property tests.
std::size_t token_lcs_length(const TokenSequence& a, const TokenSequence& b);

struct CiderBreakdown {
  std::array<double, kMaxOrder> cosine{};
  double score = 0.0;
};

/// Single-reference CIDEr: mean over n=1..4 of the cosine between tf-idf
/// weighted n-gram vectors, times `scale`. An all-zero vector makes that
/// order's term 0.
CiderBreakdown cider_breakdown(const TokenSequence& gen, const TokenSequence& ref,
                               const IdfTable& idf, double scale = kDefaultCiderScale);

inline double cider(const TokenSequence& gen, const TokenSequence& ref, const IdfTable& idf,
                    double scale = kDefaultCiderScale) {
  return cider_breakdown(gen, ref, idf, scale).score;
}

}  // namespace captem::ngram
