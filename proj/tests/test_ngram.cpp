#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "ngram/ngram.hpp"
#include "support/oracles.hpp"

namespace captem::ngram {
namespace {

std::vector<std::string> toks(std::string_view s) { return tokenize(s).tokens(); }

std::string random_sentence(std::mt19937& rng, std::size_t min_len, std::size_t max_len) {
  static const std::vector<std::string> vocab = {"the", "man",  "woman", "smiles", "frowns",
                                                 "then", "nods", "eyes",  "mouth",  "opens",
                                                 "her",  "his",  "slowly"};
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s.push_back(' ');
    s += vocab[word(rng)];
  }
  return s;
}

TEST(Tokenize, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(toks("The man smiles."), (std::vector<std::string>{"the", "man", "smiles"}));
  EXPECT_TRUE(toks("").empty());
  EXPECT_EQ(toks("He frowns, then laughs!"),
            (std::vector<std::string>{"he", "frowns", "then", "laughs"}));
  EXPECT_EQ(toks("  tabs\tand\nnewlines  "),
            (std::vector<std::string>{"tabs", "and", "newlines"}));
}

TEST(Tokenize, KeepsNonAsciiBytes) {
  EXPECT_EQ(toks("Le garçon sourit."), (std::vector<std::string>{"le", "garçon", "sourit"}));
}

TEST(Profile, CountsEveryOrder) {
  const auto p = NGramProfile::of(tokenize("a b a b a"));
  EXPECT_EQ(p.orders[0].at("a"), 3);
  EXPECT_EQ(p.orders[1].at("a b"), 2);
  EXPECT_EQ(p.orders[2].at("b a b"), 1);
  for (int n = 1; n <= kMaxOrder; ++n) {
    int total = 0;
    for (const auto& [g, c] : p.orders[static_cast<std::size_t>(n - 1)]) total += c;
    EXPECT_EQ(total, std::max(0, 5 - n + 1));
  }
}

TEST(RougeL, WorkedCase) {
  const double f = rouge_l(tokenize("the cat sat"), tokenize("the cat sat down"), 1.2);
  const double p = 1.0, r = 0.75, b2 = 1.44;
  EXPECT_NEAR(f, (1 + b2) * p * r / (r + b2 * p), 1e-12);
  EXPECT_NEAR(f, 0.8356, 1e-4);
}

TEST(RougeL, IdentityAndDisjoint) {
  const auto x = tokenize("she raises her eyebrows");
  EXPECT_EQ(rouge_l(x, x, 1.2), 1.0);
  EXPECT_EQ(rouge_l(x, x, 0.3), 1.0);
  EXPECT_EQ(rouge_l(x, tokenize("completely other words"), 1.2), 0.0);
  EXPECT_EQ(rouge_l(tokenize(""), x), 0.0);
  EXPECT_EQ(rouge_l(tokenize(""), tokenize("")), 0.0);
}

TEST(RougeL, RejectsNonPositiveBeta) {
  const auto x = tokenize("a b");
  EXPECT_THROW(rouge_l(x, x, 0.0), Error);
  EXPECT_THROW(rouge_l(x, x, -1.0), Error);
}

TEST(RougeL, LcsMatchesNaiveRecursion) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const auto a = tokenize(random_sentence(rng, 0, 10));
    const auto b = tokenize(random_sentence(rng, 0, 10));
    ASSERT_EQ(token_lcs_length(a, b), oracle::naive_lcs(a.tokens(), b.tokens()));
  }
}

TEST(RougeL, IgnoresCaseAndPunctuation) {
  EXPECT_EQ(rouge_l(tokenize("He SMILES, then nods."), tokenize("he smiles then nods slowly")),
            rouge_l(tokenize("he smiles then nods"), tokenize("He smiles then nods slowly!")));
}

TEST(Idf, EmptyCorpusThrows) {
  try {
    IdfTable::build({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
}

TEST(Idf, SingleDocumentGivesZero) {
  const auto t = IdfTable::build({tokenize("he smiles at her")});
  EXPECT_EQ(t.idf(1, "smiles"), 0.0);
  EXPECT_EQ(t.idf(2, "he smiles"), 0.0);
  EXPECT_EQ(t.doc_frequency(1, "frowns"), 0);
}

TEST(Idf, DirectFormula) {
  const auto t = IdfTable::build({tokenize("a x"), tokenize("a y"), tokenize("a z"), tokenize("a w")});
  EXPECT_EQ(t.corpus_size(), 4u);
  EXPECT_EQ(t.idf(1, "a"), 0.0);
  EXPECT_DOUBLE_EQ(t.idf(1, "x"), std::log(4.0));
  EXPECT_DOUBLE_EQ(t.idf(1, "unseen"), std::log(4.0));
}

TEST(Idf, MatchesRecount) {
  const std::vector<std::string> docs = {"the man smiles then nods", "the woman frowns",
                                         "the man frowns then smiles", "her eyes open slowly"};
  std::vector<TokenSequence> corpus;
  for (const auto& d : docs) corpus.push_back(tokenize(d));
  const auto table = IdfTable::build(corpus);
  for (int n = 1; n <= kMaxOrder; ++n) {
    std::map<oracle::Gram, int> df;
    for (const auto& d : docs) {
      for (const auto& [g, c] : oracle::gram_counts(oracle::split_words(d), static_cast<std::size_t>(n))) {
        ++df[g];
      }
    }
    for (const auto& [g, count] : df) {
      std::string key;
      for (const auto& w : g) key += (key.empty() ? "" : " ") + w;
      EXPECT_EQ(table.doc_frequency(n, key), count) << key;
      EXPECT_DOUBLE_EQ(table.idf(n, key), std::log(4.0 / count));
    }
  }
}

TEST(Cider, UniformIdfThreeTokens) {
  // Four documents, the sentence appears in none but one: idf is positive
  // for every gram of the sentence; order 4 has no grams.
  const auto s = tokenize("he smiles broadly");
  const auto idf = IdfTable::build({s, tokenize("x"), tokenize("y"), tokenize("z")});
  const auto b = cider_breakdown(s, s, idf);
  EXPECT_NEAR(b.cosine[0], 1.0, 1e-12);
  EXPECT_NEAR(b.cosine[1], 1.0, 1e-12);
  EXPECT_NEAR(b.cosine[2], 1.0, 1e-12);
  EXPECT_EQ(b.cosine[3], 0.0);
  EXPECT_NEAR(b.score, 0.75, 1e-12);
  EXPECT_NEAR(cider(s, s, idf, 10.0), 7.5, 1e-12);
}

TEST(Cider, DisjointIsZero) {
  const auto a = tokenize("he smiles");
  const auto b = tokenize("she frowns");
  const auto idf = IdfTable::build({b, tokenize("x")});
  EXPECT_EQ(cider(a, b, idf), 0.0);
  EXPECT_EQ(cider(tokenize(""), b, idf), 0.0);
}

TEST(Cider, MatchesDirectRecomputation) {
  std::mt19937 rng(29);
  for (int corpus_trial = 0; corpus_trial < 10; ++corpus_trial) {
    std::vector<std::string> docs;
    std::vector<TokenSequence> corpus;
    std::vector<std::vector<std::string>> raw;
    for (int d = 0; d < 4; ++d) {
      docs.push_back(random_sentence(rng, 3, 9));
      corpus.push_back(tokenize(docs.back()));
      raw.push_back(oracle::split_words(docs.back()));
    }
    const auto idf = IdfTable::build(corpus);
    for (int k = 0; k < 20; ++k) {
      const std::string gen = random_sentence(rng, 0, 8);
      const std::size_t ref = static_cast<std::size_t>(k) % 4;
      const double expected = oracle::cider(oracle::split_words(gen), raw[ref], raw);
      ASSERT_NEAR(cider(tokenize(gen), corpus[ref], idf), expected, 1e-9);
    }
  }
}

TEST(Cider, IsSymmetric) {
  std::mt19937 rng(31);
  std::vector<TokenSequence> corpus;
  for (int d = 0; d < 6; ++d) corpus.push_back(tokenize(random_sentence(rng, 3, 8)));
  const auto idf = IdfTable::build(corpus);
  for (int k = 0; k < 100; ++k) {
    const auto a = tokenize(random_sentence(rng, 0, 8));
    const auto b = tokenize(random_sentence(rng, 0, 8));
    const double ab = cider(a, b, idf);
    const double ba = cider(b, a, idf);
    ASSERT_NEAR(ab, ba, 1e-12);
    ASSERT_TRUE(std::isfinite(ab));
    ASSERT_GE(ab, 0.0);
  }
}

}  // namespace
}  // namespace captem::ngram
