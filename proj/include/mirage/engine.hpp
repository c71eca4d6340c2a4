#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mirage/backend.hpp"
#include "mirage/ledger.hpp"
#include "mirage/parser.hpp"
#include "mirage/prompts.hpp"
#include "mirage/script.hpp"
#include "mirage/transcript.hpp"

namespace mirage {

enum class Winner { Civilians, Culprit };
const char* to_string(Winner winner);

struct GameConfig {
  int rounds = 5;
  int max_retries = 3;
  int context_budget = 6000;
  std::optional<Language> language;  // defaults to the script's language
  std::uint64_t seed = 0;
};

struct GameState {
  std::string script_id;
  int round = 0;
  Phase phase = Phase::Introduction;
  int turn_cursor = 0;
  std::set<std::string> revealed_clues;
  std::map<std::string, std::string> accusations;  // empty value = forfeited
  std::map<std::string, std::string> votes;
  std::uint64_t rng_seed = 0;
};

struct RankedAccused {
  std::string character;
  int votes = 0;
  int suspicion = 0;
};

struct VotingResult {
  std::map<std::string, int> vote_tally;
  std::vector<RankedAccused> accused_ranking;
  std::string final_accused;
  Winner winner = Winner::Culprit;
};

/// Normative accusation order: votes desc, accumulated suspicion desc, then
/// roster order. Every roster member is ranked.
std::vector<RankedAccused> rank_accused(const std::vector<std::string>& roster_order,
                                        const std::map<std::string, int>& votes,
                                        const std::map<std::string, int>& suspicion);

VotingResult resolve_voting(const std::vector<std::string>& roster_order,
                            const std::map<std::string, int>& votes,
                            const std::map<std::string, int>& suspicion,
                            const std::set<std::string>& culprit_ids);

struct RosterEntry {
  std::string character_id;
  std::shared_ptr<AgentBackend> backend;
};

/// The turn-ordered state machine over Introduction, R rounds of
/// OpenConversation + Interaction, and Murder Voting. One step is one agent
/// turn or one phase boundary; a full game takes step_budget() steps.
class Game {
 public:
  /// Throws RosterMismatch unless the roster covers every script character
  /// exactly once. Identical inputs build identical games.
  Game(Script script, std::vector<RosterEntry> roster, GameConfig config,
       const PromptLibrary& prompts, std::shared_ptr<AgentBackend> summarizer = nullptr);

  bool finished() const { return state_.phase == Phase::Finished; }
  std::vector<TranscriptRecord> step();
  std::vector<TranscriptRecord> run_to_completion();

  /// Executes one interaction action for `actor`, who must hold the current
  /// Interaction turn. Ask compels the target's reply; Investigate reveals an
  /// unrevealed clue at the location or degrades to a repeat notice.
  std::vector<TranscriptRecord> apply_action(const std::string& actor, const Action& action);

  /// Tally, normative ranking and win rule. IncompleteVotes until every
  /// roster member has accused and voted.
  VotingResult run_voting() const;

  int step_budget() const;
  std::uint64_t next_seq() const { return next_seq_; }

  const GameState& state() const { return state_; }
  const Script& script() const { return script_; }
  const PromptLibrary& prompts() const { return prompts_; }
  const HistoryLog& history() const { return history_; }
  const SuspicionTrustLedger& ledger() const { return ledger_; }
  UsageCounters counters() const;
  Language language() const { return language_; }
  std::vector<std::string> roster_names() const;
  const std::map<std::string, std::set<std::string>>& revealed_by() const { return revealed_by_; }

  // judge-context assembly
  std::string description_of(const std::string& character) const;
  std::string self_clues_of(const std::string& character) const;
  std::string actions_of(const std::string& character) const;
  std::string role_list() const;

 private:
  struct PendingAction {
    Action action;
    std::string thought;
  };

  AgentBackend& backend_of(size_t roster_index);
  const std::string& actor_at(size_t roster_index) const;

  TranscriptRecord make_record(RecordKind kind, const std::string& actor,
                               nlohmann::json payload, UsageDelta usage = {});
  void append_history(const std::string& actor, const std::string& action,
                      const std::string& content);
  void ensure_budget(std::vector<TranscriptRecord>& records);
  UsageDelta account(const TokenUsage& usage, bool countable);
  /// Emits Failure records for unparseable attempts and accounts every
  /// attempt; returns the usage delta of the successful attempt (zero when
  /// exhausted).
  UsageDelta drain_failures(const SolicitOutcome& outcome, PromptKind kind, bool countable,
                            const std::string& actor, std::vector<TranscriptRecord>& records);

  ParserContext parser_context(const std::string& self) const;
  PromptContext base_context(const std::string& character) const;
  SolicitOutcome solicit_turn(size_t roster_index, PromptKind kind, const PromptContext& ctx,
                              const ParserContext* parser_ctx);

  std::vector<TranscriptRecord> introduction_turn();
  std::vector<TranscriptRecord> conversation_turn();
  std::vector<TranscriptRecord> interaction_turn();
  std::vector<TranscriptRecord> voting_turn();
  std::vector<TranscriptRecord> phase_boundary();

  Script script_;
  std::vector<RosterEntry> roster_;
  GameConfig config_;
  const PromptLibrary& prompts_;
  std::shared_ptr<AgentBackend> summarizer_;
  Language language_ = Language::en;

  GameState state_;
  HistoryLog history_;
  SuspicionTrustLedger ledger_;
  UsageCounters counters_;
  RerunPolicy policy_;
  std::uint64_t next_seq_ = 0;

  std::map<std::string, PendingAction> pending_;
  std::map<std::string, std::string> last_action_;
  std::map<std::string, int> tiebreak_suspicion_;
  std::map<std::string, std::set<std::string>> revealed_by_;
  std::map<std::string, std::vector<std::string>> action_log_;
  std::optional<VotingResult> voting_result_;
};

}  // namespace mirage
