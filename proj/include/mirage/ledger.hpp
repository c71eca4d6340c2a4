#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mirage/backend.hpp"
#include "mirage/prompts.hpp"
#include "mirage/transcript.hpp"

namespace mirage {

// ------------------------------------------------------------- history log

/// One renderable dialogue line. `action` is the bracketed label; the
/// rendered form is `actor: 【action】: content`.
struct HistoryEntry {
  std::uint64_t seq = 0;
  int round = 0;
  Phase phase = Phase::Introduction;
  std::string actor;
  std::string action;  // Speak | Ask | Investigate | Clue | Vote
  std::string content;
};

std::string render_history_line(const HistoryEntry& entry);

/// Append-only dialogue memory with an optional summarized prefix. Rendering
/// is always `summary text + retained lines`.
class HistoryLog {
 public:
  void append(HistoryEntry entry);

  const std::vector<HistoryEntry>& entries() const { return entries_; }
  struct SummarizedPrefix {
    std::uint64_t through_seq = 0;
    std::string text;
  };
  const std::optional<SummarizedPrefix>& summarized_prefix() const { return summarized_prefix_; }

  std::string render() const;
  int rendered_tokens() const;

  /// Replaces the summarized prefix plus the oldest `count` retained entries
  /// by `summary`. Used by maybe_summarize only.
  void replace_prefix(size_t count, std::string summary);

 private:
  std::vector<HistoryEntry> entries_;
  std::optional<SummarizedPrefix> summarized_prefix_;
  std::uint64_t last_seq_ = 0;
  bool has_entries_ever_ = false;
};

// ------------------------------------------------------ suspicion & trust

struct LedgerCell {
  int sus_total = 0;
  int trust_total = 0;
  int samples = 0;
};

/// Per (observer, subject) accumulation of paired suspicion/trust scores in
/// {0,1,2}. Feeds TII/FII and the voting tiebreak.
class SuspicionTrustLedger {
 public:
  /// Throws InvalidLevel outside {0,1,2} and SelfScoring when
  /// observer == subject.
  void record_scores(const std::string& observer, const std::string& subject, int sus, int trust);

  /// Sum of sus_total over all observers of `subject`; 0 for unknown names.
  int accumulated_suspicion(const std::string& subject) const;

  const std::map<std::pair<std::string, std::string>, LedgerCell>& cells() const { return cells_; }
  const LedgerCell* cell(const std::string& observer, const std::string& subject) const;

 private:
  std::map<std::pair<std::string, std::string>, LedgerCell> cells_;
};

// -------------------------------------------------------------- accounting

enum class ChargeDirection { EnvInput, UserOutput };

struct UsageCounters {
  long env_tokens = 0;
  long envs = 0;
  long user_tokens = 0;
  long users = 0;
  long failures = 0;
};

/// EnvInput bumps envs on every request; UserOutput bumps users only for
/// countable completions (everything but summarization and clue
/// investigation).
void charge(UsageCounters& counters, ChargeDirection direction, long tokens,
            bool countable_completion);

// ----------------------------------------------------------- summarization

struct SummarizeResult {
  int replacements = 0;
  std::vector<TranscriptRecord> events;  // Summary + Failure records, unsequenced
};

/// Compresses the oldest half of the retained entries through the
/// HistorySummary prompt until the rendering fits the token budget or only
/// the summary plus one entry remain. Summaries that fail to shrink their
/// source are rejected and retried once; persisting beyond that raises
/// SummarizerFailure, as does rerun exhaustion.
SummarizeResult maybe_summarize(HistoryLog& history, int budget_tokens, AgentBackend& summarizer,
                                const PromptLibrary& prompts, Language language,
                                RerunPolicy& policy, UsageCounters& counters);

}  // namespace mirage
