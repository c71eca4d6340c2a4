#include "mirage/prompts.hpp"

#include <cctype>
#include <cstdlib>

#include "mirage/error.hpp"
#include "mirage/text.hpp"

namespace mirage {

const char* to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::Introduction: return "introduction";
    case PromptKind::Converse: return "converse";
    case PromptKind::AskReply: return "ask_reply";
    case PromptKind::Vote: return "vote";
    case PromptKind::SuspicionScore: return "suspicion_score";
    case PromptKind::TrustScore: return "trust_score";
    case PromptKind::HistorySummary: return "history_summary";
    case PromptKind::ScriptSummary: return "script_summary";
    case PromptKind::AbilityJudge: return "ability_judge";
    case PromptKind::Reconstruction: return "reconstruction";
  }
  return "?";
}

std::vector<PromptKind> all_prompt_kinds() {
  return {PromptKind::Introduction, PromptKind::Converse,       PromptKind::AskReply,
          PromptKind::Vote,         PromptKind::SuspicionScore, PromptKind::TrustScore,
          PromptKind::HistorySummary, PromptKind::ScriptSummary, PromptKind::AbilityJudge,
          PromptKind::Reconstruction};
}

std::string render_template(const std::string& tmpl, const PromptContext& ctx) {
  std::string out;
  out.reserve(tmpl.size());
  size_t i = 0;
  while (i < tmpl.size()) {
    const char c = tmpl[i];
    if (c != '{') {
      out.push_back(c);
      ++i;
      continue;
    }
    // A placeholder is {lower_snake_case}; anything else is literal text.
    size_t j = i + 1;
    while (j < tmpl.size() && (std::islower(static_cast<unsigned char>(tmpl[j])) || tmpl[j] == '_'))
      ++j;
    if (j > i + 1 && j < tmpl.size() && tmpl[j] == '}') {
      const std::string key = tmpl.substr(i + 1, j - i - 1);
      const auto it = ctx.find(key);
      if (it == ctx.end())
        fail(ErrorCode::MissingContextField, "template requires '" + key + "'");
      out += it->second;
      i = j + 1;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

namespace {

std::string requirement_line(PromptKind kind, Language lang) {
  const bool zh = lang == Language::zh;
  switch (kind) {
    case PromptKind::Converse:
      return zh ? "你的 ### RESPONSE: 必须使用 【Ask】【姓名】: 内容 或 【Investigate】【地点】: 内容 的格式。"
                : "Your ### RESPONSE: must use the form 【Ask】【name】: content or "
                  "【Investigate】【location】: content.";
    case PromptKind::SuspicionScore:
    case PromptKind::TrustScore:
      return zh ? "你的 ### RESPONSE: 必须是从 [0, 1, 2] 中选择的一个整数。"
                : "Your ### RESPONSE: must be a single integer chosen from [0, 1, 2].";
    case PromptKind::AbilityJudge:
      return zh ? "你的 ### RESPONSE: 必须是 [0, 20] 范围内的一个整数。"
                : "Your ### RESPONSE: must be a single integer in [0, 20].";
    case PromptKind::Vote:
      return zh ? "你的 ### RESPONSE: 必须恰好是一位参与者的姓名。"
                : "Your ### RESPONSE: must be exactly one participant name.";
    default:
      return zh ? "你必须使用 ### THOUGHT: 与 ### RESPONSE: 标记。"
                : "You must use the ### THOUGHT: and ### RESPONSE: markers.";
  }
}

}  // namespace

PromptLibrary PromptLibrary::load(const std::string& dir) {
  PromptLibrary lib;
  for (const Language lang : {Language::en, Language::zh}) {
    const std::string base = dir + "/" + to_string(lang) + "/";
    for (const PromptKind kind : all_prompt_kinds())
      lib.templates_[{kind, lang}] = read_text_file(base + to_string(kind) + ".txt");
    lib.retry_frame_[lang] = read_text_file(base + "retry_frame.txt");
  }
  return lib;
}

PromptLibrary PromptLibrary::builtin() {
  if (const char* env = std::getenv("MIRAGE_PROMPT_DIR"); env && *env)
    return load(env);
  return load(default_data_dir() + "/prompts");
}

const std::string& PromptLibrary::raw_template(PromptKind kind, Language lang) const {
  return templates_.at({kind, lang});
}

std::string PromptLibrary::build_prompt(PromptKind kind, Language lang,
                                        const PromptContext& ctx) const {
  return render_template(raw_template(kind, lang), ctx);
}

std::string PromptLibrary::build_retry_prompt(PromptKind kind, Language lang,
                                              const std::string& original,
                                              const std::string& previous_output) const {
  PromptContext ctx{{"original_prompt", original},
                    {"previous_output", previous_output},
                    {"requirement", requirement_line(kind, lang)}};
  return render_template(retry_frame_.at(lang), ctx);
}

std::string default_data_dir() {
#ifdef MIRAGE_DATA_DIR
  return MIRAGE_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace mirage
