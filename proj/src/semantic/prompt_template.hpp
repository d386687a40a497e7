#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace captem::semantic {

/// A prompt with `{{name}}` placeholders. (name, version) feeds the response
/// cache key, so bump `version` whenever `text` changes.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  PromptTemplate(std::string name, int version, std::string text);

  /// File layout: `# key: value` header lines, a `---` line, then the body.
  /// Required keys: name, version.
  static PromptTemplate parse(std::string_view file_text, const std::string& origin);
  static PromptTemplate load(const std::filesystem::path& path);

  const std::string& name() const noexcept { return name_; }
  int version() const noexcept { return version_; }
  const std::string& text() const noexcept { return text_; }

  /// Distinct placeholder names in order of first appearance.
  const std::vector<std::string>& placeholders() const noexcept { return placeholders_; }

  /// Throws Error(kInvalidArgument) if any placeholder has no value.
  std::string fill(const std::map<std::string, std::string>& values) const;

  /// Serialises back into the on-disk layout accepted by parse().
  std::string to_file_text() const;

 private:
  std::string name_;
  int version_ = 0;
  std::string text_;
  std::vector<std::string> placeholders_;
};

/// The prompts the gateway backend sends.
struct TemplateSet {
  PromptTemplate extract_events;
  PromptTemplate classify_relations;
  PromptTemplate align_format;
  PromptTemplate judge_scores;
  PromptTemplate repair;

  static TemplateSet builtin();

  /// Loads `<name>.txt` from `dir` for each template; missing files fall
  /// back to the built-in text.
  static TemplateSet load_dir(const std::filesystem::path& dir);

  std::vector<const PromptTemplate*> all() const;
};

// Reply block markers requested by the structured templates.
inline constexpr std::string_view kBlockBegin = "### BEGIN";
inline constexpr std::string_view kBlockEnd = "### END";

}  // namespace captem::semantic
