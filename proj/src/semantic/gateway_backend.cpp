#include "semantic/gateway_backend.hpp"

#include <cctype>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "core/error.hpp"

namespace captem::semantic {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool gap = false;
  for (char c : trim(s)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      gap = true;
      continue;
    }
    if (gap && !out.empty()) out.push_back(' ');
    gap = false;
    out.push_back(c);
  }
  return out;
}

// "1. foo", "2) foo", "- foo", "* foo", "\"foo\"" -> "foo"
std::string strip_list_marker(std::string_view line) {
  line = trim(line);
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')' || line[i] == ':')) {
    line.remove_prefix(i + 1);
  } else if (!line.empty() && (line.front() == '-' || line.front() == '*')) {
    line.remove_prefix(1);
  }
  line = trim(line);
  if (line.size() >= 2 && line.front() == '"' && line.back() == '"') {
    line = line.substr(1, line.size() - 2);
  }
  return collapse_spaces(line);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(start, end - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

[[noreturn]] void rethrow_transport(const Error& e) {
  if (e.code() == ErrorCode::kMalformedReply) {
    throw Error(ErrorCode::kMalformedBackendReply, e.what());
  }
  throw Error(ErrorCode::kBackendUnavailable,
              fmt::format("{}: {}", error_code_name(e.code()), e.what()));
}

}  // namespace

namespace reply {

std::optional<std::string> extract_block(std::string_view text) {
  const auto lines = split_lines(text);
  std::optional<std::size_t> begin;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto t = trim(lines[i]);
    if (!begin && t == kBlockBegin) {
      begin = i;
    } else if (begin && t == kBlockEnd) {
      std::string out;
      for (std::size_t k = *begin + 1; k < i; ++k) {
        out.append(lines[k]);
        out.push_back('\n');
      }
      return out;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::string>> parse_events(std::string_view text,
                                                     std::string& problem) {
  const auto block = extract_block(text);
  if (!block) {
    problem = fmt::format("reply has no '{}' ... '{}' block", kBlockBegin, kBlockEnd);
    return std::nullopt;
  }
  std::vector<std::string> events;
  for (auto line : split_lines(*block)) {
    auto ev = strip_list_marker(line);
    if (ev.empty() || ev == "<event>") continue;
    events.push_back(std::move(ev));
  }
  return events;
}

std::optional<MatchMatrix> parse_relations(std::string_view text, std::size_t rows,
                                           std::size_t cols, std::string& problem) {
  const auto block = extract_block(text);
  if (!block) {
    problem = fmt::format("reply has no '{}' ... '{}' block", kBlockBegin, kBlockEnd);
    return std::nullopt;
  }
  static const std::regex kLine(R"(^\s*G\s*(\d+)\s*[,;:]?\s*R\s*(\d+)\s*[,;:=-]?\s*([A-Za-z_ ]+?)\s*$)",
                                std::regex::icase);
  MatchMatrix match(rows, cols);
  std::vector<bool> seen(rows * cols, false);
  std::size_t filled = 0;
  for (auto line : split_lines(*block)) {
    if (trim(line).empty()) continue;
    std::smatch m;
    const std::string s(line);
    if (!std::regex_match(s, m, kLine)) {
      problem = fmt::format("cannot parse line '{}'", trim(line));
      return std::nullopt;
    }
    const auto i = std::stoul(m[1].str());
    const auto j = std::stoul(m[2].str());
    RelationLabel label;
    if (i < 1 || i > rows || j < 1 || j > cols) {
      problem = fmt::format("pair G{} R{} is out of range", i, j);
      return std::nullopt;
    }
    if (!parse_relation(m[3].str(), label)) {
      problem = fmt::format("unknown relation '{}'", m[3].str());
      return std::nullopt;
    }
    const std::size_t cell = (i - 1) * cols + (j - 1);
    if (seen[cell]) {
      problem = fmt::format("pair G{} R{} answered twice", i, j);
      return std::nullopt;
    }
    seen[cell] = true;
    ++filled;
    match.set(i - 1, j - 1, label);
  }
  if (filled != rows * cols) {
    problem = fmt::format("expected {} pairs, got {}", rows * cols, filled);
    return std::nullopt;
  }
  return match;
}

std::optional<JudgeScores> parse_judge(std::string_view text, std::string& problem) {
  const auto block = extract_block(text);
  const std::string body = block ? *block : std::string(text);
  static const std::regex kNumber(R"([-+]?\d+(?:\.\d+)?)");
  std::vector<double> values;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), kNumber);
       it != std::sregex_iterator(); ++it) {
    values.push_back(std::stod(it->str()));
  }
  if (values.size() != 4) {
    problem = fmt::format("expected 4 scores, found {}", values.size());
    return std::nullopt;
  }
  return JudgeScores{values[0], values[1], values[2], values[3]};
}

bool in_judge_range(const JudgeScores& s) noexcept {
  for (double v : {s.correctness, s.detail, s.context, s.temporal}) {
    if (!(v >= 1.0 && v <= 5.0)) return false;
  }
  return true;
}

}  // namespace reply

GatewayBackend::GatewayBackend(std::shared_ptr<gateway::Gateway> gateway, TemplateSet templates)
    : gateway_(std::move(gateway)), templates_(std::move(templates)) {
  if (!gateway_) throw Error(ErrorCode::kInvalidArgument, "gateway backend needs a gateway");
}

std::string GatewayBackend::identity() const {
  return "gateway/" + gateway_->config().model_name;
}

std::vector<TemplateVersion> GatewayBackend::template_versions() const {
  std::vector<TemplateVersion> out;
  for (const auto* t : templates_.all()) out.push_back({t->name(), t->version()});
  return out;
}

std::string GatewayBackend::ask(const PromptTemplate& tmpl, const std::string& prompt) const {
  try {
    return gateway_->complete({tmpl.name(), tmpl.version(), prompt});
  } catch (const Error& e) {
    rethrow_transport(e);
  }
}

std::string GatewayBackend::ask_repair(const std::string& request, const std::string& bad_reply,
                                       const std::string& problem) const {
  const auto& t = templates_.repair;
  return ask(t, t.fill({{"problem", problem}, {"request", request}, {"reply", bad_reply}}));
}

EventSequence GatewayBackend::extract_events(std::string_view text, SourceRole role) const {
  if (trim(text).empty()) return EventSequence(role);
  const auto& t = templates_.extract_events;
  const std::string prompt = t.fill({{"text", std::string(text)}});
  std::string answer = ask(t, prompt);
  std::string problem;
  auto events = reply::parse_events(answer, problem);
  if (!events) {
    answer = ask_repair(prompt, answer, problem);
    events = reply::parse_events(answer, problem);
  }
  if (!events) throw Error(ErrorCode::kMalformedBackendReply, "extract_events: " + problem);
  return EventSequence::from_texts(*events, role);
}

MatchMatrix GatewayBackend::classify_relations(const EventSequence& gen,
                                               const EventSequence& ref) const {
  if (gen.empty() || ref.empty()) return MatchMatrix(gen.size(), ref.size());
  const auto listing = [](const EventSequence& seq, char tag) {
    std::string out;
    for (const auto& e : seq.events()) out += fmt::format("{}{}: {}\n", tag, e.ordinal + 1, e.text);
    return out;
  };
  const auto& t = templates_.classify_relations;
  const std::string prompt = t.fill({{"generated_events", listing(gen, 'G')},
                                     {"reference_events", listing(ref, 'R')},
                                     {"pair_count", std::to_string(gen.size() * ref.size())}});
  std::string answer = ask(t, prompt);
  std::string problem;
  auto match = reply::parse_relations(answer, gen.size(), ref.size(), problem);
  if (!match) {
    answer = ask_repair(prompt, answer, problem);
    match = reply::parse_relations(answer, gen.size(), ref.size(), problem);
  }
  if (!match) throw Error(ErrorCode::kMalformedBackendReply, "classify_relations: " + problem);
  return *match;
}

std::string GatewayBackend::align_format(std::string_view generated,
                                         std::string_view reference) const {
  if (generated.empty()) return {};
  const auto& t = templates_.align_format;
  return ask(t, t.fill({{"generated", std::string(generated)},
                        {"reference", std::string(reference)}}));
}

JudgeScores GatewayBackend::judge_scores(std::string_view generated,
                                         std::string_view reference) const {
  const auto& t = templates_.judge_scores;
  const std::string prompt =
      t.fill({{"generated", std::string(generated)}, {"reference", std::string(reference)}});
  std::string answer = ask(t, prompt);
  std::string problem;
  auto scores = reply::parse_judge(answer, problem);
  if (scores && !reply::in_judge_range(*scores)) problem = "scores must lie in [1, 5]";
  if (!scores || !reply::in_judge_range(*scores)) {
    answer = ask_repair(prompt, answer, problem);
    scores = reply::parse_judge(answer, problem);
    if (!scores) throw Error(ErrorCode::kMalformedBackendReply, "judge_scores: " + problem);
    if (!reply::in_judge_range(*scores)) {
      throw Error(ErrorCode::kOutOfRangeScore,
                  fmt::format("judge_scores: {},{},{},{} outside [1, 5]", scores->correctness,
                              scores->detail, scores->context, scores->temporal));
    }
  }
  return *scores;
}

}  // namespace captem::semantic
