#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gateway/gateway.hpp"
#include "semantic/backend.hpp"
#include "semantic/prompt_template.hpp"

namespace captem::semantic {

// Reply parsers. Each returns nullopt and sets `problem` on failure.
namespace reply {

/// Text between the "### BEGIN" / "### END" lines, or nullopt if absent.
std::optional<std::string> extract_block(std::string_view reply);

std::optional<std::vector<std::string>> parse_events(std::string_view reply,
                                                     std::string& problem);

std::optional<MatchMatrix> parse_relations(std::string_view reply, std::size_t rows,
                                           std::size_t cols, std::string& problem);

/// Accepts "c,d,x,t" inside a block or as the whole reply. Range is not
/// checked here.
std::optional<JudgeScores> parse_judge(std::string_view reply, std::string& problem);

bool in_judge_range(const JudgeScores& s) noexcept;

}  // namespace reply

/// LLM-backed implementation: every capability is one templated prompt sent
/// through the gateway, with one repair re-ask when the reply cannot be used.
/// Transport failures surface as kBackendUnavailable, unusable replies as
/// kMalformedBackendReply, and judge scores outside [1,5] as kOutOfRangeScore.
class GatewayBackend final : public SemanticBackend {
 public:
  GatewayBackend(std::shared_ptr<gateway::Gateway> gateway, TemplateSet templates);

  std::string identity() const override;
  std::vector<TemplateVersion> template_versions() const override;

  EventSequence extract_events(std::string_view text, SourceRole role) const override;
  MatchMatrix classify_relations(const EventSequence& gen,
                                 const EventSequence& ref) const override;
  std::string align_format(std::string_view generated,
                           std::string_view reference) const override;
  JudgeScores judge_scores(std::string_view generated,
                           std::string_view reference) const override;

  const gateway::Gateway& gateway() const noexcept { return *gateway_; }

 private:
  std::string ask(const PromptTemplate& tmpl, const std::string& prompt) const;
  std::string ask_repair(const std::string& request, const std::string& bad_reply,
                         const std::string& problem) const;

  std::shared_ptr<gateway::Gateway> gateway_;
  TemplateSet templates_;
};

}  // namespace captem::semantic
