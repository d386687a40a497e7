#include "semantic/prompt_template.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "core/error.hpp"

namespace captem::semantic {

namespace {

std::vector<std::string> scan_placeholders(const std::string& text) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = text.find("{{", pos)) != std::string::npos) {
    const std::size_t end = text.find("}}", pos + 2);
    if (end == std::string::npos) break;
    std::string name = text.substr(pos + 2, end - pos - 2);
    bool ok = !name.empty();
    for (char c : name) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (ok && std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    pos = end + 2;
  }
  return names;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Wording reconstructs the intent of the published prompts; it is not a copy.
constexpr const char* kExtractText = R"(You extract facial events from a video caption.
An event is one facial movement or change of facial expression: eyes, eyebrows,
gaze, mouth, lips, cheeks, head movement, or an expression such as smiling or
frowning. Ignore appearance, clothing, background, and speculation.

List the events in the order they happen in the caption. Write each one as a
short standalone clause that names its subject, for example
"the man raises his eyebrows".

Answer with one event per line between the two marker lines and nothing else.
If the caption contains no facial events, put no lines between the markers.
### BEGIN
<event>
### END

Caption:
{{text}}
)";

constexpr const char* kClassifyText = R"(You compare facial events from a generated caption (G) with facial events
from a reference caption (R). For every pair (G, R) decide the relation:
SAME     - both describe the same facial action or expression
OPPOSITE - they describe contradicting actions (e.g. smiles vs. frowns)
NONE     - they are unrelated

Generated events:
{{generated_events}}

Reference events:
{{reference_events}}

Answer with exactly one line per pair, {{pair_count}} lines in total, in the
form "G<i> R<j> <SAME|OPPOSITE|NONE>", between the two marker lines and
nothing else.
### BEGIN
G1 R1 SAME
### END
)";

constexpr const char* kAlignText = R"(Rewrite the generated description so that it follows the format and style
of the reference description. Do not add, remove, or change any content of
the generated description; only change its layout and phrasing style.

Reference description (format example only):
{{reference}}

Generated description:
{{generated}}

Reply with the rewritten generated description only.
)";

constexpr const char* kJudgeText = R"(You evaluate a generated description of facial expression changes in a video
against a reference description. Rate it on four criteria, each an integer
from 1 (poor) to 5 (excellent):
correctness - factual agreement with the reference
detail      - coverage of the facial details in the reference
context     - consistency with the overall situation in the reference
temporal    - correct order of the facial events

Reference description:
{{reference}}

Generated description:
{{generated}}

Answer with the four scores as "correctness,detail,context,temporal" on one
line between the two marker lines and nothing else.
### BEGIN
3,3,3,3
### END
)";

constexpr const char* kRepairText = R"(Your previous reply could not be used: {{problem}}

Original request:
{{request}}

Your previous reply:
{{reply}}

Answer the original request again, following its reply format exactly.
)";

}  // namespace

PromptTemplate::PromptTemplate(std::string name, int version, std::string text)
    : name_(std::move(name)),
      version_(version),
      text_(std::move(text)),
      placeholders_(scan_placeholders(text_)) {}

PromptTemplate PromptTemplate::parse(std::string_view file_text, const std::string& origin) {
  std::istringstream in{std::string(file_text)};
  std::string line;
  std::string name;
  int version = -1;
  bool saw_separator = false;
  while (std::getline(in, line)) {
    if (trim(line) == "---") {
      saw_separator = true;
      break;
    }
    auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() != '#') {
      throw Error(ErrorCode::kConfig, fmt::format("{}: unexpected header line '{}'", origin, line));
    }
    body.remove_prefix(1);
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) continue;
    const auto key = trim(body.substr(0, colon));
    const auto value = trim(body.substr(colon + 1));
    if (key == "name") {
      name = std::string(value);
    } else if (key == "version") {
      try {
        version = std::stoi(std::string(value));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kConfig, fmt::format("{}: bad version '{}'", origin, value));
      }
    }
  }
  if (!saw_separator) throw Error(ErrorCode::kConfig, origin + ": missing '---' separator");
  if (name.empty() || version < 0) {
    throw Error(ErrorCode::kConfig, origin + ": header needs 'name' and 'version'");
  }
  std::ostringstream rest;
  rest << in.rdbuf();
  return PromptTemplate(std::move(name), version, rest.str());
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::string PromptTemplate::fill(const std::map<std::string, std::string>& values) const {
  for (const auto& p : placeholders_) {
    if (!values.count(p)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("template {} v{}: placeholder '{}' not filled", name_, version_, p));
    }
  }
  std::string out;
  out.reserve(text_.size());
  std::size_t pos = 0;
  while (pos < text_.size()) {
    const std::size_t open = text_.find("{{", pos);
    if (open == std::string::npos) break;
    const std::size_t close = text_.find("}}", open + 2);
    if (close == std::string::npos) break;
    const auto it = values.find(text_.substr(open + 2, close - open - 2));
    out.append(text_, pos, open - pos);
    if (it != values.end()) {
      out += it->second;
    } else {
      out.append(text_, open, close + 2 - open);
    }
    pos = close + 2;
  }
  out.append(text_, pos, std::string::npos);
  return out;
}

std::string PromptTemplate::to_file_text() const {
  return fmt::format("# name: {}\n# version: {}\n# note: reconstruction\n---\n{}", name_,
                     version_, text_);
}

TemplateSet TemplateSet::builtin() {
  return TemplateSet{
      PromptTemplate("extract_events", 1, kExtractText),
      PromptTemplate("classify_relations", 1, kClassifyText),
      PromptTemplate("align_format", 1, kAlignText),
      PromptTemplate("judge_scores", 1, kJudgeText),
      PromptTemplate("repair", 1, kRepairText),
  };
}

TemplateSet TemplateSet::load_dir(const std::filesystem::path& dir) {
  TemplateSet set = builtin();
  for (PromptTemplate* t : {&set.extract_events, &set.classify_relations, &set.align_format,
                            &set.judge_scores, &set.repair}) {
    const auto path = dir / (t->name() + ".txt");
    if (!std::filesystem::exists(path)) continue;
    PromptTemplate loaded = PromptTemplate::load(path);
    if (loaded.name() != t->name()) {
      throw Error(ErrorCode::kConfig, fmt::format("{}: declares name '{}', expected '{}'",
                                                  path.string(), loaded.name(), t->name()));
    }
    *t = std::move(loaded);
  }
  return set;
}

std::vector<const PromptTemplate*> TemplateSet::all() const {
  return {&extract_events, &classify_relations, &align_format, &judge_scores, &repair};
}

}  // namespace captem::semantic
