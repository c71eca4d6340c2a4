#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mirage/prompts.hpp"

namespace mirage {

struct SpeakAction {
  std::string text;
  bool operator==(const SpeakAction&) const = default;
};
struct AskAction {
  std::string target;
  std::string question;
  bool operator==(const AskAction&) const = default;
};
struct InvestigateAction {
  std::string location;
  std::string reason;
  bool operator==(const InvestigateAction&) const = default;
};
struct VoteAction {
  std::string accused;
  bool operator==(const VoteAction&) const = default;
};
using Action = std::variant<SpeakAction, AskAction, InvestigateAction, VoteAction>;

/// Decoded agent output: the thought/response split plus the kind-specific
/// payload (an Action for Converse/Vote, an integer for score kinds, nothing
/// for free-text kinds).
struct ParsedResponse {
  PromptKind kind = PromptKind::Introduction;
  std::string thought;
  std::string response;
  std::optional<Action> action;
  std::optional<int> score;

  bool operator==(const ParsedResponse&) const = default;
};

/// Validation context for kinds whose payload must name game entities.
/// Matching is exact-string first, then case-insensitive.
struct ParserContext {
  std::string self;                     // asking yourself is rejected
  std::vector<std::string> roster;      // valid Ask targets / Vote names
  std::vector<std::string> locations;   // valid Investigate locations
};

/// Total over arbitrary byte strings: anything outside the grammar raises
/// Error{ParseFailure}; nothing else escapes.
ParsedResponse parse_response(PromptKind kind, const std::string& raw,
                              const ParserContext* ctx = nullptr);

/// Canonical raw form that parse_response maps back onto the same value.
std::string render_canonical(const ParsedResponse& parsed);

}  // namespace mirage
