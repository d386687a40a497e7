#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "core/error.hpp"
#include "gateway/gateway.hpp"
#include "semantic/gateway_backend.hpp"
#include "semantic/mock_backend.hpp"
#include "semantic/prompt_template.hpp"
#include "support/stub_server.hpp"
#include "support/temp_dir.hpp"

namespace captem::semantic {
namespace {

std::vector<std::string> texts(const EventSequence& seq) {
  std::vector<std::string> out;
  for (const auto& e : seq.events()) out.push_back(e.text);
  return out;
}

TEST(MockBackend, ExtractsClausesInOrder) {
  const MockBackend mock;
  EXPECT_TRUE(mock.extract_events("", SourceRole::kGenerated).empty());
  EXPECT_EQ(texts(mock.extract_events("He raises his eyebrows. Then he smiles.", SourceRole::kGenerated)),
            (std::vector<std::string>{"he raises his eyebrows", "he smiles"}));
  EXPECT_EQ(mock.extract_events("the woman frowns", SourceRole::kReference).size(), 1u);
  EXPECT_EQ(texts(mock.extract_events("She blinks and then nods! Does he smile?", SourceRole::kGenerated)),
            (std::vector<std::string>{"she blinks", "nods", "does he smile"}));
}

TEST(MockBackend, RelationRules) {
  EXPECT_EQ(MockBackend::relate("he smiles", "he smiles"), RelationLabel::kSameMeaning);
  EXPECT_EQ(MockBackend::relate("he smiles", "he frowns"), RelationLabel::kOppositeMeaning);
  EXPECT_EQ(MockBackend::relate("he smiles", "she nods"), RelationLabel::kNoRelation);
  EXPECT_EQ(MockBackend::relate("she opened her eyes", "she closed her eyes"),
            RelationLabel::kOppositeMeaning);
}

TEST(MockBackend, ClassifyShapeMatchesSequences) {
  const MockBackend mock;
  const auto g = EventSequence::from_texts({"a b", "c d", "e"}, SourceRole::kGenerated);
  const auto r = EventSequence::from_texts({"a b", "x"}, SourceRole::kReference);
  const auto m = mock.classify_relations(g, r);
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_TRUE(m.same(0, 0));
  const auto empty = mock.classify_relations(EventSequence(), r);
  EXPECT_EQ(empty.rows(), 0u);
  EXPECT_EQ(empty.cols(), 2u);
}

TEST(MockBackend, SameIsReflexiveAndSymmetric) {
  std::mt19937 rng(3);
  const std::vector<std::string> words = {"he", "she", "smiles", "frowns", "opens", "closes",
                                          "eyes", "mouth", "slowly", "up", "down"};
  std::uniform_int_distribution<std::size_t> len(1, 5), w(0, words.size() - 1);
  const auto phrase = [&] {
    std::string s;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) s += (i ? " " : "") + words[w(rng)];
    return s;
  };
  for (int k = 0; k < 500; ++k) {
    const auto a = phrase();
    const auto b = phrase();
    ASSERT_EQ(MockBackend::relate(a, a), RelationLabel::kSameMeaning);
    ASSERT_EQ(MockBackend::relate(a, b), MockBackend::relate(b, a)) << a << " | " << b;
  }
}

TEST(MockBackend, AlignIsIdentity) {
  const MockBackend mock;
  EXPECT_EQ(mock.align_format("He smiles.  Then NODS", "ref"), "He smiles.  Then NODS");
  EXPECT_EQ(mock.align_format("", "ref"), "");
}

TEST(MockBackend, JudgeHeuristic) {
  const MockBackend mock;
  const auto same = mock.judge_scores("He smiles.", "he smiles");
  EXPECT_EQ(same.correctness, 5.0);
  EXPECT_EQ(same.temporal, 5.0);
  const auto disjoint = mock.judge_scores("he smiles", "she frowns deeply");
  EXPECT_EQ(disjoint.correctness, 1.0);
  EXPECT_EQ(disjoint.detail, 1.0);
  EXPECT_EQ(disjoint.context, 1.0);
  EXPECT_EQ(disjoint.temporal, 1.0);
  const auto partial = mock.judge_scores("he smiles", "he smiles and nods");
  EXPECT_TRUE(reply::in_judge_range(partial));
  EXPECT_EQ(partial.correctness, 5.0);
  EXPECT_EQ(partial.detail, 3.0);
}

TEST(PromptTemplate, FillAndPlaceholders) {
  const PromptTemplate t("demo", 2, "Hello {{name}}, {{name}} meets {{other}}.");
  EXPECT_EQ(t.placeholders(), (std::vector<std::string>{"name", "other"}));
  EXPECT_EQ(t.fill({{"name", "A"}, {"other", "B"}}), "Hello A, A meets B.");
  EXPECT_THROW(t.fill({{"name", "A"}}), Error);
}

TEST(PromptTemplate, ParseRoundTrip) {
  const PromptTemplate t("demo", 3, "Line one {{x}}\nLine two\n");
  const auto back = PromptTemplate::parse(t.to_file_text(), "<mem>");
  EXPECT_EQ(back.name(), "demo");
  EXPECT_EQ(back.version(), 3);
  EXPECT_EQ(back.text(), t.text());
}

TEST(PromptTemplate, ParseRequiresHeader) {
  EXPECT_THROW(PromptTemplate::parse("no header\n", "<mem>"), Error);
  EXPECT_THROW(PromptTemplate::parse("# name: x\n---\nbody", "<mem>"), Error);
}

TEST(PromptTemplate, ShippedFilesMatchBuiltins) {
  const auto dir = std::filesystem::path(CAPTEM_SOURCE_DIR) / "templates";
  const auto loaded = TemplateSet::load_dir(dir);
  const auto builtin = TemplateSet::builtin();
  const auto a = loaded.all();
  const auto b = builtin.all();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(std::filesystem::exists(dir / (b[i]->name() + ".txt"))) << b[i]->name();
    EXPECT_EQ(a[i]->name(), b[i]->name());
    EXPECT_EQ(a[i]->version(), b[i]->version());
    EXPECT_EQ(a[i]->text(), b[i]->text()) << b[i]->name();
  }
}

TEST(ReplyParsing, Events) {
  std::string problem;
  const auto ev = reply::parse_events("Sure!\n### BEGIN\n1. He smiles\n- she  nods\n\n### END\n", problem);
  ASSERT_TRUE(ev);
  EXPECT_EQ(*ev, (std::vector<std::string>{"He smiles", "she nods"}));
  EXPECT_FALSE(reply::parse_events("1. He smiles", problem));
  EXPECT_FALSE(problem.empty());
}

TEST(ReplyParsing, RelationsMustCoverEveryPair) {
  std::string problem;
  const auto m = reply::parse_relations(
      "### BEGIN\nG1 R1 SAME\nG1 R2 none\nG2 R1 Opposite\nG2 R2 NONE\n### END", 2, 2, problem);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->at(0, 0), RelationLabel::kSameMeaning);
  EXPECT_EQ(m->at(1, 0), RelationLabel::kOppositeMeaning);
  EXPECT_FALSE(reply::parse_relations("### BEGIN\nG1 R1 SAME\n### END", 2, 2, problem));
  EXPECT_FALSE(reply::parse_relations("### BEGIN\nG1 R1 SAME\nG1 R1 SAME\n### END", 1, 1, problem));
  EXPECT_FALSE(reply::parse_relations("### BEGIN\nG3 R1 SAME\n### END", 1, 1, problem));
}

TEST(ReplyParsing, Judge) {
  std::string problem;
  const auto s = reply::parse_judge("3,4,4,3", problem);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->correctness, 3.0);
  EXPECT_EQ(s->detail, 4.0);
  EXPECT_EQ(s->context, 4.0);
  EXPECT_EQ(s->temporal, 3.0);
  EXPECT_FALSE(reply::parse_judge("3,4", problem));
  EXPECT_FALSE(reply::in_judge_range({0.0, 3.0, 3.0, 3.0}));
}

class GatewayBackendTest : public ::testing::Test {
 protected:
  std::shared_ptr<gateway::Gateway> gateway_for(const stub::ChatServer& server) {
    gateway::GatewayConfig cfg;
    cfg.base_url = server.base_url();
    cfg.cache_dir = dir_.path() / "cache";
    cfg.backoff_base_s = 0.001;
    cfg.timeout_s = 5;
    cfg.api_key_env = "CAPTEM_TEST_UNSET_KEY";
    return std::make_shared<gateway::Gateway>(cfg);
  }
  testutil::TempDir dir_;
};

TEST_F(GatewayBackendTest, AlignReplyIsVerbatim) {
  stub::ChatServer server([](std::size_t, const std::string&) {
    return stub::ok("  The man smiles.\nThen he nods.  ");
  });
  GatewayBackend backend(gateway_for(server), TemplateSet::builtin());
  EXPECT_EQ(backend.align_format("man smile nod", "The woman frowns."),
            "  The man smiles.\nThen he nods.  ");
  EXPECT_EQ(backend.align_format("", "ref"), "");
  EXPECT_EQ(server.calls(), 1u);
}

TEST_F(GatewayBackendTest, JudgeParsesScores) {
  stub::ChatServer server([](std::size_t, const std::string&) { return stub::ok("3,4,4,3"); });
  GatewayBackend backend(gateway_for(server), TemplateSet::builtin());
  const auto s = backend.judge_scores("gen", "ref");
  EXPECT_EQ(s.correctness, 3.0);
  EXPECT_EQ(s.detail, 4.0);
  EXPECT_EQ(s.context, 4.0);
  EXPECT_EQ(s.temporal, 3.0);
}

TEST_F(GatewayBackendTest, JudgeOutOfRangeAfterReask) {
  stub::ChatServer server([](std::size_t, const std::string&) { return stub::ok("7,4,4,3"); });
  GatewayBackend backend(gateway_for(server), TemplateSet::builtin());
  try {
    backend.judge_scores("gen", "ref");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRangeScore);
  }
  EXPECT_EQ(server.calls(), 2u);
}

TEST_F(GatewayBackendTest, MalformedReplyIsRepairedOnce) {
  stub::ChatServer server([](std::size_t i, const std::string&) {
    return i == 0 ? stub::ok("He smiles, she nods") : stub::ok("### BEGIN\nhe smiles\nshe nods\n### END");
  });
  GatewayBackend backend(gateway_for(server), TemplateSet::builtin());
  const auto seq = backend.extract_events("He smiles and she nods.", SourceRole::kGenerated);
  EXPECT_EQ(texts(seq), (std::vector<std::string>{"he smiles", "she nods"}));
  EXPECT_EQ(server.calls(), 2u);
  const auto prompt = server.seen()[1].body["messages"][0]["content"].get<std::string>();
  EXPECT_NE(prompt.find("He smiles, she nods"), std::string::npos);
}

TEST_F(GatewayBackendTest, MalformedTwiceIsTyped) {
  stub::ChatServer server([](std::size_t, const std::string&) { return stub::ok("no block"); });
  GatewayBackend backend(gateway_for(server), TemplateSet::builtin());
  try {
    backend.extract_events("He smiles.", SourceRole::kGenerated);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedBackendReply);
  }
}

TEST_F(GatewayBackendTest, ClassifyBuildsMatrix) {
  stub::ChatServer server([](std::size_t, const std::string& prompt) {
    EXPECT_NE(prompt.find("G2: she nods"), std::string::npos);
    return stub::ok("### BEGIN\nG1 R1 SAME\nG2 R1 NONE\n### END");
  });
  GatewayBackend backend(gateway_for(server), TemplateSet::builtin());
  const auto g = EventSequence::from_texts({"he smiles", "she nods"}, SourceRole::kGenerated);
  const auto r = EventSequence::from_texts({"he grins"}, SourceRole::kReference);
  const auto m = backend.classify_relations(g, r);
  EXPECT_TRUE(m.same(0, 0));
  EXPECT_FALSE(m.same(1, 0));
  EXPECT_EQ(backend.classify_relations(EventSequence(), r).rows(), 0u);
  EXPECT_EQ(server.calls(), 1u);
}

TEST_F(GatewayBackendTest, TransportFailureIsBackendUnavailable) {
  stub::ChatServer server([](std::size_t, const std::string&) { return stub::status(401); });
  GatewayBackend backend(gateway_for(server), TemplateSet::builtin());
  try {
    backend.extract_events("He smiles.", SourceRole::kGenerated);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}

TEST_F(GatewayBackendTest, IdentityAndTemplates) {
  stub::ChatServer server([](std::size_t, const std::string&) { return stub::ok(""); });
  GatewayBackend backend(gateway_for(server), TemplateSet::builtin());
  EXPECT_EQ(backend.identity(), "gateway/gpt-3.5-turbo");
  EXPECT_EQ(backend.template_versions().size(), 5u);
}

}  // namespace
}  // namespace captem::semantic
