#pragma once

#include <map>
#include <string>
#include <vector>

#include "mirage/script.hpp"

namespace mirage {

enum class PromptKind {
  Introduction,
  Converse,
  AskReply,
  Vote,
  SuspicionScore,
  TrustScore,
  HistorySummary,
  ScriptSummary,
  AbilityJudge,
  Reconstruction,
};

const char* to_string(PromptKind kind);
std::vector<PromptKind> all_prompt_kinds();

/// Placeholder values for one rendering. Keys use the template spelling
/// (name, description, self_clues, history, ...).
using PromptContext = std::map<std::string, std::string>;

/// Loads the per-(kind, language) template files from a prompts directory
/// laid out as <dir>/{en,zh}/<kind>.txt, plus the retry framing template.
class PromptLibrary {
 public:
  static PromptLibrary load(const std::string& dir);
  /// Library from the compiled-in data directory, overridable with the
  /// MIRAGE_PROMPT_DIR environment variable.
  static PromptLibrary builtin();

  const std::string& raw_template(PromptKind kind, Language lang) const;

  /// Substitutes every {placeholder} in the template from ctx. Throws
  /// MissingContextField when the template references a key ctx lacks.
  std::string build_prompt(PromptKind kind, Language lang, const PromptContext& ctx) const;

  /// Prompt for a rerun attempt: the original prompt, the unparseable output,
  /// and a restatement of the format requirements for this kind.
  std::string build_retry_prompt(PromptKind kind, Language lang, const std::string& original,
                                 const std::string& previous_output) const;

 private:
  std::map<std::pair<PromptKind, Language>, std::string> templates_;
  std::map<Language, std::string> retry_frame_;
};

std::string render_template(const std::string& tmpl, const PromptContext& ctx);

/// Default data directory (prompts/, scripts/) baked in at build time.
std::string default_data_dir();

}  // namespace mirage
