#include "ngram/ngram.hpp"

#include <cctype>
#include <cmath>
#include <set>

#include "core/error.hpp"

namespace captem::ngram {

std::string TokenSequence::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens_[i];
  }
  return out;
}

TokenSequence tokenize(std::string_view text) {
  TokenSequence seq;
  std::string cur;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    // Bytes >= 0x80 (UTF-8 continuation/lead bytes) stay inside tokens.
    if (uc < 0x80 && (std::isspace(uc) || std::ispunct(uc) || std::iscntrl(uc))) {
      if (!cur.empty()) {
        seq.tokens_.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(static_cast<char>(uc < 0x80 ? std::tolower(uc) : uc));
    }
  }
  if (!cur.empty()) seq.tokens_.push_back(std::move(cur));
  return seq;
}

NGramProfile NGramProfile::of(const TokenSequence& tokens) {
  NGramProfile p;
  const auto& t = tokens.tokens();
  for (int n = 1; n <= kMaxOrder; ++n) {
    if (t.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t i = 0; i + n <= t.size(); ++i) {
      std::string gram = t[i];
      for (int k = 1; k < n; ++k) {
        gram.push_back(' ');
        gram += t[i + k];
      }
      ++p.orders[n - 1][gram];
    }
  }
  return p;
}

IdfTable IdfTable::build(const std::vector<TokenSequence>& reference_corpus) {
  if (reference_corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot build idf table from an empty corpus");
  }
  IdfTable table;
  table.corpus_size_ = reference_corpus.size();
  for (const auto& doc : reference_corpus) {
    const NGramProfile profile = NGramProfile::of(doc);
    for (int n = 0; n < kMaxOrder; ++n) {
      for (const auto& [gram, count] : profile.orders[n]) ++table.doc_freq_[n][gram];
    }
  }
  return table;
}

int IdfTable::doc_frequency(int order, const std::string& gram) const {
  const auto& m = doc_freq_.at(order - 1);
  const auto it = m.find(gram);
  return it == m.end() ? 0 : it->second;
}

double IdfTable::idf(int order, const std::string& gram) const {
  const int df = std::max(1, doc_frequency(order, gram));
  return std::log(static_cast<double>(corpus_size_) / static_cast<double>(df));
}

std::size_t token_lcs_length(const TokenSequence& a, const TokenSequence& b) {
  const std::size_t n = b.size();
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double rouge_l(const TokenSequence& gen, const TokenSequence& ref, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rouge_l beta must be > 0");
  if (gen.empty() || ref.empty()) return 0.0;
  const double lcs = static_cast<double>(token_lcs_length(gen, ref));
  const double p = lcs / static_cast<double>(gen.size());
  const double r = lcs / static_cast<double>(ref.size());
  const double b2 = beta * beta;
  const double denom = r + b2 * p;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * p * r / denom;
}

namespace {

std::map<std::string, double> weigh(const NGramCounts& counts, int order, const IdfTable& idf) {
  std::map<std::string, double> v;
  for (const auto& [gram, c] : counts) v.emplace(gram, c * idf.idf(order, gram));
  return v;
}

double norm(const std::map<std::string, double>& v) {
  double s = 0.0;
  for (const auto& [g, w] : v) s += w * w;
  return std::sqrt(s);
}

}  // namespace

CiderBreakdown cider_breakdown(const TokenSequence& gen, const TokenSequence& ref,
                               const IdfTable& idf, double scale) {
  const NGramProfile pg = NGramProfile::of(gen);
  const NGramProfile pr = NGramProfile::of(ref);
  CiderBreakdown out;
  double sum = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto vg = weigh(pg.orders[n - 1], n, idf);
    const auto vr = weigh(pr.orders[n - 1], n, idf);
    const double ng = norm(vg);
    const double nr = norm(vr);
    double cos = 0.0;
    if (ng > 0.0 && nr > 0.0) {
      double dot = 0.0;
      for (const auto& [gram, w] : vg) {
        if (const auto it = vr.find(gram); it != vr.end()) dot += w * it->second;
      }
      cos = dot / (ng * nr);
    }
    out.cosine[n - 1] = cos;
    sum += cos;
  }
  out.score = scale * sum / kMaxOrder;
  return out;
}

}  // namespace captem::ngram
