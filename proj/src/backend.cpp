#include "mirage/backend.hpp"

#include "mirage/error.hpp"
#include "mirage/text.hpp"

namespace mirage {

// ---------------------------------------------------------------- scripted

ScriptedBackend::ScriptedBackend(std::vector<std::string> plays) : plays_(std::move(plays)) {}

Completion ScriptedBackend::complete(const CompletionRequest& request) {
  std::lock_guard lock(mutex_);
  if (next_ >= plays_.size())
    fail(ErrorCode::PlaybookExhausted,
         "scripted backend has no play left for solicitation #" + std::to_string(next_ + 1));
  Completion out;
  out.text = plays_[next_++];
  out.usage.input_tokens = count_tokens(request.prompt);
  out.usage.output_tokens = count_tokens(out.text);
  return out;
}

size_t ScriptedBackend::plays_consumed() const {
  std::lock_guard lock(mutex_);
  return next_;
}

// ------------------------------------------------------------------ random

RandomBackend::RandomBackend(std::uint64_t seed) : rng_(seed) {}

Completion RandomBackend::complete(const CompletionRequest& request) {
  std::lock_guard lock(mutex_);
  const auto pick = [this](size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng_);
  };

  std::string response;
  switch (request.kind) {
    case PromptKind::Converse: {
      std::vector<std::string> others;
      for (const auto& name : request.roster)
        if (name != request.self_name) others.push_back(name);
      const bool can_ask = !others.empty();
      const bool can_investigate = !request.locations.empty();
      const bool ask = can_ask && (!can_investigate || pick(2) == 0);
      if (ask)
        response = "\xE3\x80\x90""Ask\xE3\x80\x91\xE3\x80\x90" + others[pick(others.size())] +
                   "\xE3\x80\x91: Where were you when it happened?";
      else if (can_investigate)
        response = "\xE3\x80\x90""Investigate\xE3\x80\x91\xE3\x80\x90" +
                   request.locations[pick(request.locations.size())] +
                   "\xE3\x80\x91: Something may be hidden there.";
      else
        response = "\xE3\x80\x90""Ask\xE3\x80\x91\xE3\x80\x90?\xE3\x80\x91: ?";
      break;
    }
    case PromptKind::SuspicionScore:
    case PromptKind::TrustScore:
      response = std::to_string(pick(3));
      break;
    case PromptKind::AbilityJudge:
      response = std::to_string(pick(21));
      break;
    case PromptKind::Vote:
      response = request.roster.empty() ? std::string("?")
                                        : request.roster[pick(request.roster.size())];
      break;
    default:
      response = "I watch the others and keep my thoughts to myself. (" +
                 std::to_string(pick(1000)) + ")";
      break;
  }

  Completion out;
  out.text = "### THOUGHT: considered the table.\n### RESPONSE: " + response;
  out.usage.input_tokens = count_tokens(request.prompt);
  out.usage.output_tokens = count_tokens(out.text);
  return out;
}

std::shared_ptr<AgentBackend> scripted_backend(std::vector<std::string> plays) {
  return std::make_shared<ScriptedBackend>(std::move(plays));
}

std::shared_ptr<AgentBackend> random_backend(std::uint64_t seed) {
  return std::make_shared<RandomBackend>(seed);
}

// ----------------------------------------------------------------- solicit

SolicitOutcome try_solicit(AgentBackend& backend, const PromptLibrary& prompts,
                           const CompletionRequest& request, RerunPolicy& policy,
                           const ParserContext* parser_ctx) {
  if (policy.max_retries < 0) fail(ErrorCode::ConfigError, "max_retries must be >= 0");
  SolicitOutcome out;
  CompletionRequest attempt_request = request;
  for (int attempt = 1; attempt <= 1 + policy.max_retries; ++attempt) {
    const Completion completion = backend.complete(attempt_request);
    out.attempt_usage.push_back(completion.usage);
    out.attempts = attempt;
    try {
      out.parsed = parse_response(request.kind, completion.text, parser_ctx);
      return out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseFailure) throw;
      policy.failure_counter += 1;
      out.failed_raw.push_back(completion.text);
      attempt_request.prompt = prompts.build_retry_prompt(request.kind, request.language,
                                                          request.prompt, completion.text);
    }
  }
  return out;  // exhausted
}

SolicitOutcome solicit(AgentBackend& backend, const PromptLibrary& prompts, PromptKind kind,
                       Language language, const PromptContext& ctx, RerunPolicy& policy,
                       const ParserContext* parser_ctx) {
  CompletionRequest request;
  request.kind = kind;
  request.language = language;
  request.prompt = prompts.build_prompt(kind, language, ctx);
  if (parser_ctx) {
    request.self_name = parser_ctx->self;
    request.roster = parser_ctx->roster;
    request.locations = parser_ctx->locations;
  }
  SolicitOutcome out = try_solicit(backend, prompts, request, policy, parser_ctx);
  if (out.exhausted())
    fail(ErrorCode::RerunExhausted,
         std::string(to_string(kind)) + " output unparseable after " +
             std::to_string(out.attempts) + " attempts");
  return out;
}

}  // namespace mirage
