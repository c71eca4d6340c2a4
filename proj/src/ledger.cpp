#include "mirage/ledger.hpp"

#include "mirage/error.hpp"
#include "mirage/text.hpp"

namespace mirage {

std::string render_history_line(const HistoryEntry& entry) {
  return entry.actor + ": \xE3\x80\x90" + entry.action + "\xE3\x80\x91: " + entry.content;
}

void HistoryLog::append(HistoryEntry entry) {
  if (has_entries_ever_ && entry.seq <= last_seq_)
    fail(ErrorCode::StorageError, "history seq must be strictly increasing");
  last_seq_ = entry.seq;
  has_entries_ever_ = true;
  entries_.push_back(std::move(entry));
}

std::string HistoryLog::render() const {
  std::string out;
  if (summarized_prefix_) {
    out += summarized_prefix_->text;
    if (!out.empty() && out.back() != '\n') out += '\n';
  }
  for (const auto& e : entries_) {
    out += render_history_line(e);
    out += '\n';
  }
  return out;
}

int HistoryLog::rendered_tokens() const { return count_tokens(render()); }

void HistoryLog::replace_prefix(size_t count, std::string summary) {
  if (count == 0 || count > entries_.size())
    fail(ErrorCode::StorageError, "bad summarization prefix size");
  summarized_prefix_ = SummarizedPrefix{entries_[count - 1].seq, std::move(summary)};
  entries_.erase(entries_.begin(), entries_.begin() + static_cast<long>(count));
}

void SuspicionTrustLedger::record_scores(const std::string& observer, const std::string& subject,
                                         int sus, int trust) {
  if (observer == subject) fail(ErrorCode::SelfScoring, "'" + observer + "' cannot score itself");
  if (sus < 0 || sus > 2)
    fail(ErrorCode::InvalidLevel, "suspicion " + std::to_string(sus) + " outside {0,1,2}");
  if (trust < 0 || trust > 2)
    fail(ErrorCode::InvalidLevel, "trust " + std::to_string(trust) + " outside {0,1,2}");
  auto& cell = cells_[{observer, subject}];
  cell.sus_total += sus;
  cell.trust_total += trust;
  cell.samples += 1;
}

int SuspicionTrustLedger::accumulated_suspicion(const std::string& subject) const {
  int total = 0;
  for (const auto& [key, cell] : cells_)
    if (key.second == subject) total += cell.sus_total;
  return total;
}

const LedgerCell* SuspicionTrustLedger::cell(const std::string& observer,
                                             const std::string& subject) const {
  const auto it = cells_.find({observer, subject});
  return it == cells_.end() ? nullptr : &it->second;
}

void charge(UsageCounters& counters, ChargeDirection direction, long tokens,
            bool countable_completion) {
  if (tokens < 0) fail(ErrorCode::StorageError, "negative token charge");
  if (direction == ChargeDirection::EnvInput) {
    counters.env_tokens += tokens;
    counters.envs += 1;
  } else {
    counters.user_tokens += tokens;
    if (countable_completion) counters.users += 1;
  }
}

namespace {

// One summarizer backend call == one transcript record carrying its usage.
// Summarization completions never count towards `users`.
UsageDelta summarizer_delta(UsageCounters& counters, const TokenUsage& usage) {
  charge(counters, ChargeDirection::EnvInput, usage.input_tokens, false);
  charge(counters, ChargeDirection::UserOutput, usage.output_tokens, false);
  UsageDelta delta;
  delta.env_tokens = usage.input_tokens;
  delta.envs = 1;
  delta.user_tokens = usage.output_tokens;
  delta.users = 0;
  return delta;
}

TranscriptRecord summarizer_failure_record(UsageCounters& counters, const TokenUsage& usage,
                                           const std::string& reason) {
  TranscriptRecord failure;
  failure.kind = RecordKind::Failure;
  failure.payload = {{"stage", to_string(PromptKind::HistorySummary)}, {"reason", reason}};
  failure.usage = summarizer_delta(counters, usage);
  return failure;
}

}  // namespace

SummarizeResult maybe_summarize(HistoryLog& history, int budget_tokens, AgentBackend& summarizer,
                                const PromptLibrary& prompts, Language language,
                                RerunPolicy& policy, UsageCounters& counters) {
  if (budget_tokens <= 0) fail(ErrorCode::ConfigError, "token budget must be positive");
  SummarizeResult result;

  while (history.rendered_tokens() > budget_tokens && history.entries().size() > 1) {
    const size_t segment = std::max<size_t>(1, history.entries().size() / 2);
    std::string source;
    if (const auto& prefix = history.summarized_prefix()) {
      source += prefix->text;
      if (!source.empty() && source.back() != '\n') source += '\n';
    }
    for (size_t i = 0; i < segment; ++i) {
      source += render_history_line(history.entries()[i]);
      source += '\n';
    }
    const int source_tokens = count_tokens(source);

    std::string summary;
    TokenUsage summary_usage;
    bool accepted = false;
    for (int round = 0; round < 2 && !accepted; ++round) {
      CompletionRequest request;
      request.kind = PromptKind::HistorySummary;
      request.language = language;
      request.prompt = prompts.build_prompt(PromptKind::HistorySummary, language,
                                            {{"text", source}});
      const SolicitOutcome outcome = try_solicit(summarizer, prompts, request, policy);
      for (size_t i = 0; i < outcome.failed_raw.size(); ++i)
        result.events.push_back(summarizer_failure_record(counters, outcome.attempt_usage[i],
                                                          "unparseable output"));
      if (outcome.exhausted())
        fail(ErrorCode::SummarizerFailure, "history summarizer output unparseable after " +
                                               std::to_string(outcome.attempts) + " attempts");
      summary = outcome.parsed->response;
      summary_usage = outcome.attempt_usage.back();
      if (count_tokens(summary) < source_tokens) {
        accepted = true;
      } else {
        // A summary at least as long as its source would break rendering
        // monotonicity; reject it like any unprocessable output.
        policy.failure_counter += 1;
        result.events.push_back(summarizer_failure_record(counters, summary_usage,
                                                          "summary not shorter than source"));
      }
    }
    if (!accepted)
      fail(ErrorCode::SummarizerFailure, "summary failed to shrink its source after one retry");

    history.replace_prefix(segment, summary);
    result.replacements += 1;

    TranscriptRecord record;
    record.kind = RecordKind::Summary;
    record.payload = {{"through_seq", history.summarized_prefix()->through_seq},
                      {"text", summary}};
    record.usage = summarizer_delta(counters, summary_usage);
    result.events.push_back(record);
  }
  return result;
}

}  // namespace mirage
