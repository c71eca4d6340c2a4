#include "mirage/parser.hpp"

#include <algorithm>

#include "mirage/error.hpp"
#include "mirage/text.hpp"

namespace mirage {

namespace {

constexpr const char* kThoughtMarker = "### THOUGHT:";
constexpr const char* kResponseMarker = "### RESPONSE:";
constexpr const char* kOpenBracket = "\xE3\x80\x90";   // 【
constexpr const char* kCloseBracket = "\xE3\x80\x91";  // 】
constexpr const char* kAskTag = "\xE3\x80\x90""Ask\xE3\x80\x91";
constexpr const char* kInvestigateTag = "\xE3\x80\x90""Investigate\xE3\x80\x91";

[[noreturn]] void parse_fail(const std::string& reason) {
  fail(ErrorCode::ParseFailure, reason);
}

int parse_integer(const std::string& text, int lo, int hi) {
  const std::string t = trim(text);
  if (t.empty()) parse_fail("empty score");
  size_t i = t[0] == '-' ? 1 : 0;
  if (i == t.size()) parse_fail("non-integer score '" + t + "'");
  for (size_t k = i; k < t.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(t[k])))
      parse_fail("non-integer score '" + t + "'");
  long value = 0;
  try {
    value = std::stol(t);
  } catch (const std::exception&) {
    parse_fail("non-integer score '" + t + "'");
  }
  if (value < lo || value > hi)
    parse_fail("score " + t + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(value);
}

// Exact match first, then case-insensitive; empty optional on no match.
std::optional<std::string> match_name(const std::string& name,
                                      const std::vector<std::string>& candidates) {
  for (const auto& c : candidates)
    if (c == name) return c;
  for (const auto& c : candidates)
    if (iequals(c, name)) return c;
  return std::nullopt;
}

// Decodes `【Ask】【target】: body` / `【Investigate】【location】: body`
// starting at the first tag found in `response`.
Action parse_converse_action(const std::string& response, const ParserContext* ctx) {
  const size_t ask_pos = response.find(kAskTag);
  const size_t inv_pos = response.find(kInvestigateTag);
  if (ask_pos == std::string::npos && inv_pos == std::string::npos)
    parse_fail("response contains neither 【Ask】 nor 【Investigate】");
  const bool is_ask = ask_pos != std::string::npos && (inv_pos == std::string::npos || ask_pos < inv_pos);
  const size_t tag_pos = is_ask ? ask_pos : inv_pos;
  const size_t tag_len = std::string(is_ask ? kAskTag : kInvestigateTag).size();

  size_t arg_open = tag_pos + tag_len;
  while (arg_open < response.size() && (response[arg_open] == ' ' || response[arg_open] == '\t'))
    ++arg_open;
  if (response.compare(arg_open, 3, kOpenBracket) != 0)
    parse_fail("expected 【…】 argument after action tag");
  const size_t arg_close = response.find(kCloseBracket, arg_open + 3);
  if (arg_close == std::string::npos) parse_fail("unterminated 【…】 argument");
  const std::string arg = trim(response.substr(arg_open + 3, arg_close - arg_open - 3));
  if (arg.empty()) parse_fail("empty action argument");

  std::string body = response.substr(arg_close + 3);
  // strip one separating colon (ASCII or full-width)
  size_t b = 0;
  while (b < body.size() && (body[b] == ' ' || body[b] == '\t')) ++b;
  if (b < body.size() && body[b] == ':')
    ++b;
  else if (b + 3 <= body.size() && body.compare(b, 3, "\xEF\xBC\x9A") == 0)  // ：
    b += 3;
  body = trim(body.substr(b));

  if (is_ask) {
    std::string target = arg;
    if (ctx) {
      std::vector<std::string> others;
      for (const auto& name : ctx->roster)
        if (name != ctx->self) others.push_back(name);
      const auto matched = match_name(arg, others);
      if (!matched) parse_fail("unknown ask target '" + arg + "'");
      target = *matched;
    }
    return AskAction{target, body};
  }
  std::string location = arg;
  if (ctx) {
    const auto matched = match_name(arg, ctx->locations);
    if (!matched) parse_fail("unknown investigate location '" + arg + "'");
    location = *matched;
  }
  return InvestigateAction{location, body};
}

}  // namespace

ParsedResponse parse_response(PromptKind kind, const std::string& raw, const ParserContext* ctx) {
  ParsedResponse out;
  out.kind = kind;

  const size_t thought_pos = raw.find(kThoughtMarker);
  if (thought_pos == std::string::npos) parse_fail("missing ### THOUGHT: marker");
  const size_t thought_begin = thought_pos + std::string(kThoughtMarker).size();
  const size_t response_pos = raw.find(kResponseMarker, thought_begin);
  if (response_pos == std::string::npos) parse_fail("missing ### RESPONSE: marker");
  out.thought = trim(raw.substr(thought_begin, response_pos - thought_begin));
  out.response = trim(raw.substr(response_pos + std::string(kResponseMarker).size()));

  switch (kind) {
    case PromptKind::Converse:
      out.action = parse_converse_action(out.response, ctx);
      break;
    case PromptKind::SuspicionScore:
    case PromptKind::TrustScore:
      out.score = parse_integer(out.response, 0, 2);
      break;
    case PromptKind::AbilityJudge:
      out.score = parse_integer(out.response, 0, 20);
      break;
    case PromptKind::Vote: {
      const std::string name = trim(out.response);
      if (name.empty()) parse_fail("empty vote");
      if (ctx) {
        const auto matched = match_name(name, ctx->roster);
        if (!matched) parse_fail("non-roster vote name '" + name + "'");
        out.action = VoteAction{*matched};
      } else {
        out.action = VoteAction{name};
      }
      break;
    }
    default:
      break;  // free-text kinds carry the response only
  }
  return out;
}

std::string render_canonical(const ParsedResponse& parsed) {
  std::string response = parsed.response;
  if (parsed.action) {
    if (const auto* ask = std::get_if<AskAction>(&*parsed.action)) {
      response = std::string(kAskTag) + kOpenBracket + ask->target + kCloseBracket + ": " +
                 ask->question;
    } else if (const auto* inv = std::get_if<InvestigateAction>(&*parsed.action)) {
      response = std::string(kInvestigateTag) + kOpenBracket + inv->location + kCloseBracket +
                 ": " + inv->reason;
    } else if (const auto* vote = std::get_if<VoteAction>(&*parsed.action)) {
      response = vote->accused;
    }
  } else if (parsed.score) {
    response = std::to_string(*parsed.score);
  }
  return std::string(kThoughtMarker) + " " + parsed.thought + "\n" + kResponseMarker + " " +
         response;
}

}  // namespace mirage
