#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "mirage/parser.hpp"
#include "mirage/prompts.hpp"

namespace mirage {

struct TokenUsage {
  int input_tokens = 0;
  int output_tokens = 0;
};

struct Completion {
  std::string text;
  TokenUsage usage;
};

/// One fully-rendered solicitation. Everything a backend may want to know
/// travels in the request; backends hold no game state.
struct CompletionRequest {
  PromptKind kind = PromptKind::Introduction;
  Language language = Language::en;
  std::string prompt;
  // structural hints, used by the random backend to stay inside the grammar
  std::string self_name;
  std::vector<std::string> roster;
  std::vector<std::string> locations;
};

/// Behavioral contract for anything that can complete a prompt. Backends are
/// shared services and must tolerate concurrent calls from independent games.
class AgentBackend {
 public:
  virtual ~AgentBackend() = default;
  virtual Completion complete(const CompletionRequest& request) = 0;
};

/// Test double replaying canned outputs in order; throws PlaybookExhausted
/// when solicited more often than plays were provided. Usage numbers come
/// from the shared token heuristic.
class ScriptedBackend : public AgentBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> plays);
  Completion complete(const CompletionRequest& request) override;
  size_t plays_consumed() const;

 private:
  std::vector<std::string> plays_;
  size_t next_ = 0;
  mutable std::mutex mutex_;
};

/// Seeded agent producing grammatically valid outputs for every prompt kind;
/// drives the Monte-Carlo suites without a model.
class RandomBackend : public AgentBackend {
 public:
  explicit RandomBackend(std::uint64_t seed);
  Completion complete(const CompletionRequest& request) override;

 private:
  std::mt19937_64 rng_;
  std::mutex mutex_;
};

std::shared_ptr<AgentBackend> scripted_backend(std::vector<std::string> plays);
std::shared_ptr<AgentBackend> random_backend(std::uint64_t seed);

/// Bounded re-solicitation state. failure_counter grows by one per
/// unparseable output and is never reset.
struct RerunPolicy {
  int max_retries = 3;
  long failure_counter = 0;
};

struct SolicitOutcome {
  std::optional<ParsedResponse> parsed;  // empty when every attempt was unparseable
  int attempts = 0;
  std::vector<TokenUsage> attempt_usage;  // one entry per backend call
  std::vector<std::string> failed_raw;    // unparseable outputs, in order
  bool exhausted() const { return !parsed.has_value(); }
};

/// Prompts the backend until its output parses, resubmitting the original
/// prompt plus the rejected output at most policy.max_retries extra times.
/// `request.prompt` must already be rendered. An exhausted outcome is
/// returned, not thrown, so callers can still account the spent attempts.
SolicitOutcome try_solicit(AgentBackend& backend, const PromptLibrary& prompts,
                           const CompletionRequest& request, RerunPolicy& policy,
                           const ParserContext* parser_ctx = nullptr);

/// Convenience: renders the prompt from (kind, language, ctx), solicits, and
/// throws RerunExhausted when no attempt parsed.
SolicitOutcome solicit(AgentBackend& backend, const PromptLibrary& prompts, PromptKind kind,
                       Language language, const PromptContext& ctx, RerunPolicy& policy,
                       const ParserContext* parser_ctx = nullptr);

}  // namespace mirage
