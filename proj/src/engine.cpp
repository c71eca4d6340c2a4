#include "mirage/engine.hpp"

#include <algorithm>

#include "mirage/error.hpp"
#include "mirage/text.hpp"

namespace mirage {

const char* to_string(Winner winner) {
  return winner == Winner::Civilians ? "Civilians" : "Culprit";
}

std::vector<RankedAccused> rank_accused(const std::vector<std::string>& roster_order,
                                        const std::map<std::string, int>& votes,
                                        const std::map<std::string, int>& suspicion) {
  std::vector<RankedAccused> ranking;
  ranking.reserve(roster_order.size());
  for (const auto& name : roster_order) {
    const auto v = votes.find(name);
    const auto s = suspicion.find(name);
    ranking.push_back({name, v == votes.end() ? 0 : v->second,
                       s == suspicion.end() ? 0 : s->second});
  }
  // stable: ties fall through to roster order
  std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    return a.suspicion > b.suspicion;
  });
  return ranking;
}

VotingResult resolve_voting(const std::vector<std::string>& roster_order,
                            const std::map<std::string, int>& votes,
                            const std::map<std::string, int>& suspicion,
                            const std::set<std::string>& culprit_ids) {
  VotingResult result;
  for (const auto& name : roster_order) {
    const auto it = votes.find(name);
    result.vote_tally[name] = it == votes.end() ? 0 : it->second;
  }
  result.accused_ranking = rank_accused(roster_order, votes, suspicion);
  result.final_accused = result.accused_ranking.front().character;
  result.winner =
      culprit_ids.count(result.final_accused) ? Winner::Civilians : Winner::Culprit;
  return result;
}

namespace {

struct PartLabels {
  const char* story;
  const char* script;
  const char* relationships;
  const char* performance;
  const char* goals;
  const char* abilities;
  const char* none;
};

const PartLabels kEnLabels{"Story", "Script", "Relationships", "Performance",
                           "Goals", "Abilities", "(none)"};
const PartLabels kZhLabels{"人物故事", "人物剧本", "人物关系", "角色表现",
                           "角色目标", "其他能力", "（无）"};

const PartLabels& labels_for(Language lang) {
  return lang == Language::zh ? kZhLabels : kEnLabels;
}

}  // namespace

Game::Game(Script script, std::vector<RosterEntry> roster, GameConfig config,
           const PromptLibrary& prompts, std::shared_ptr<AgentBackend> summarizer)
    : script_(std::move(script)),
      roster_(std::move(roster)),
      config_(config),
      prompts_(prompts),
      summarizer_(std::move(summarizer)) {
  if (config_.rounds < 1) fail(ErrorCode::ConfigError, "rounds must be >= 1");
  if (roster_.size() != script_.characters.size())
    fail(ErrorCode::RosterMismatch, "roster of " + std::to_string(roster_.size()) +
                                        " for a " + std::to_string(script_.characters.size()) +
                                        "-character script");
  std::set<std::string> seen;
  for (const auto& entry : roster_) {
    if (!entry.backend) fail(ErrorCode::RosterMismatch, "missing backend for " + entry.character_id);
    if (!script_.find_character(entry.character_id))
      fail(ErrorCode::RosterMismatch, "'" + entry.character_id + "' is not a script character");
    if (!seen.insert(entry.character_id).second)
      fail(ErrorCode::RosterMismatch, "'" + entry.character_id + "' assigned twice");
  }
  language_ = config_.language.value_or(script_.language);
  policy_.max_retries = config_.max_retries;
  state_.script_id = script_.id;
  state_.rng_seed = config_.seed;
}

int Game::step_budget() const {
  const int n = static_cast<int>(roster_.size());
  const int r = config_.rounds;
  return n * 2 * r + n + 2 * n + (2 * r + 2);
}

std::vector<std::string> Game::roster_names() const {
  std::vector<std::string> names;
  names.reserve(roster_.size());
  for (const auto& entry : roster_) names.push_back(entry.character_id);
  return names;
}

UsageCounters Game::counters() const {
  UsageCounters out = counters_;
  out.failures = policy_.failure_counter;
  return out;
}

AgentBackend& Game::backend_of(size_t roster_index) { return *roster_[roster_index].backend; }

const std::string& Game::actor_at(size_t roster_index) const {
  return roster_[roster_index].character_id;
}

TranscriptRecord Game::make_record(RecordKind kind, const std::string& actor,
                                   nlohmann::json payload, UsageDelta usage) {
  TranscriptRecord record;
  record.seq = next_seq_++;
  record.round = state_.round;
  record.phase = state_.phase;
  record.actor = actor;
  record.kind = kind;
  record.payload = std::move(payload);
  record.usage = usage;
  return record;
}

void Game::append_history(const std::string& actor, const std::string& action,
                          const std::string& content) {
  HistoryEntry entry;
  entry.seq = next_seq_;  // ties history lines to the upcoming record
  entry.round = state_.round;
  entry.phase = state_.phase;
  entry.actor = actor;
  entry.action = action;
  entry.content = content;
  history_.append(entry);
}

UsageDelta Game::account(const TokenUsage& usage, bool countable) {
  charge(counters_, ChargeDirection::EnvInput, usage.input_tokens, false);
  charge(counters_, ChargeDirection::UserOutput, usage.output_tokens, countable);
  UsageDelta delta;
  delta.env_tokens = usage.input_tokens;
  delta.envs = 1;
  delta.user_tokens = usage.output_tokens;
  delta.users = countable ? 1 : 0;
  return delta;
}

UsageDelta Game::drain_failures(const SolicitOutcome& outcome, PromptKind kind, bool countable,
                                const std::string& actor, std::vector<TranscriptRecord>& records) {
  for (size_t i = 0; i < outcome.failed_raw.size(); ++i) {
    const UsageDelta delta = account(outcome.attempt_usage[i], countable);
    records.push_back(make_record(
        RecordKind::Failure, actor,
        {{"stage", to_string(kind)}, {"reason", "unparseable output"}}, delta));
  }
  if (outcome.exhausted()) return {};
  return account(outcome.attempt_usage.back(), countable);
}

ParserContext Game::parser_context(const std::string& self) const {
  ParserContext ctx;
  ctx.self = self;
  ctx.roster = roster_names();
  ctx.locations = script_.clue_locations();
  return ctx;
}

std::string Game::description_of(const std::string& character) const {
  const CharacterProfile* profile = script_.find_character(character);
  if (!profile) fail(ErrorCode::UnknownTarget, "no character '" + character + "'");
  const PartLabels& labels = labels_for(language_);

  // Multi-stage text joins every stage whose unlock round has been reached.
  std::string script_text;
  for (size_t i = 0; i < script_.stages.size(); ++i) {
    if (script_.stages[i].unlock_round > state_.round) break;
    if (i < profile->script.size() && !profile->script[i].empty()) {
      if (!script_text.empty()) script_text += "\n";
      script_text += profile->script[i];
    }
  }

  std::string out;
  out += std::string(labels.story) + ": " + profile->story + "\n";
  out += std::string(labels.script) + ": " + script_text + "\n";
  out += std::string(labels.relationships) + ": " + profile->relationships + "\n";
  out += std::string(labels.performance) + ": " + profile->performance + "\n";
  out += std::string(labels.goals) + ": " + profile->goals + "\n";
  out += std::string(labels.abilities) + ": " +
         (profile->abilities.empty() ? labels.none : profile->abilities.c_str());
  return out;
}

std::string Game::self_clues_of(const std::string& character) const {
  const CharacterProfile* profile = script_.find_character(character);
  if (!profile) fail(ErrorCode::UnknownTarget, "no character '" + character + "'");
  if (profile->private_clues.empty()) return labels_for(language_).none;
  std::string out;
  for (const auto& clue_id : profile->private_clues) {
    if (const Clue* clue = script_.find_clue(clue_id)) {
      if (!out.empty()) out += "\n";
      out += clue->location + ": " + clue->text;
    }
  }
  return out;
}

std::string Game::actions_of(const std::string& character) const {
  const auto it = action_log_.find(character);
  if (it == action_log_.end() || it->second.empty()) return labels_for(language_).none;
  std::string out;
  for (const auto& line : it->second) {
    if (!out.empty()) out += "\n";
    out += line;
  }
  return out;
}

std::string Game::role_list() const {
  std::string out;
  for (const auto& entry : roster_) {
    if (!out.empty()) out += "\n";
    out += entry.character_id;
  }
  return out;
}

PromptContext Game::base_context(const std::string& character) const {
  return {{"name", character},
          {"description", description_of(character)},
          {"self_clues", self_clues_of(character)},
          {"history", history_.render()}};
}

void Game::ensure_budget(std::vector<TranscriptRecord>& records) {
  if (!summarizer_) return;
  if (history_.rendered_tokens() <= config_.context_budget) return;
  SummarizeResult result = maybe_summarize(history_, config_.context_budget, *summarizer_,
                                           prompts_, language_, policy_, counters_);
  for (TranscriptRecord& record : result.events) {
    record.seq = next_seq_++;
    record.round = state_.round;
    record.phase = state_.phase;
    record.actor = "Environment";
    records.push_back(std::move(record));
  }
}

SolicitOutcome Game::solicit_turn(size_t roster_index, PromptKind kind, const PromptContext& ctx,
                                  const ParserContext* parser_ctx) {
  CompletionRequest request;
  request.kind = kind;
  request.language = language_;
  request.prompt = prompts_.build_prompt(kind, language_, ctx);
  request.self_name = actor_at(roster_index);
  request.roster = roster_names();
  request.locations = script_.clue_locations();
  return try_solicit(backend_of(roster_index), prompts_, request, policy_, parser_ctx);
}

std::vector<TranscriptRecord> Game::step() {
  if (finished()) fail(ErrorCode::StorageError, "step() on a finished game");
  const size_t n = roster_.size();
  const auto cursor = static_cast<size_t>(state_.turn_cursor);
  switch (state_.phase) {
    case Phase::Introduction:
      return cursor < n ? introduction_turn() : phase_boundary();
    case Phase::OpenConversation:
      return cursor < n ? conversation_turn() : phase_boundary();
    case Phase::Interaction:
      return cursor < n ? interaction_turn() : phase_boundary();
    case Phase::Voting:
      return cursor < 2 * n ? voting_turn() : phase_boundary();
    case Phase::Finished:
      break;
  }
  fail(ErrorCode::StorageError, "unreachable phase");
}

std::vector<TranscriptRecord> Game::run_to_completion() {
  std::vector<TranscriptRecord> all;
  while (!finished()) {
    auto records = step();
    all.insert(all.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
  }
  return all;
}

std::vector<TranscriptRecord> Game::introduction_turn() {
  std::vector<TranscriptRecord> records;
  ensure_budget(records);
  const auto cursor = static_cast<size_t>(state_.turn_cursor);
  const std::string& actor = actor_at(cursor);

  const SolicitOutcome outcome =
      solicit_turn(cursor, PromptKind::Introduction, base_context(actor), nullptr);
  const UsageDelta delta = drain_failures(outcome, PromptKind::Introduction, true, actor, records);
  const std::string text = outcome.exhausted() ? "" : outcome.parsed->response;

  append_history(actor, "Speak", text);
  records.push_back(make_record(RecordKind::Speak, actor, {{"text", text}}, delta));
  state_.turn_cursor += 1;
  return records;
}

std::vector<TranscriptRecord> Game::conversation_turn() {
  std::vector<TranscriptRecord> records;
  ensure_budget(records);
  const auto cursor = static_cast<size_t>(state_.turn_cursor);
  const std::string& speaker = actor_at(cursor);

  PromptContext ctx = base_context(speaker);
  const std::string history_snapshot = ctx.at("history");
  {
    std::string others;
    for (const auto& entry : roster_)
      if (entry.character_id != speaker) {
        if (!others.empty()) others += "\n";
        others += entry.character_id;
      }
    std::string address;
    for (const auto& location : script_.clue_locations()) {
      if (!address.empty()) address += "\n";
      address += location;
    }
    const auto last = last_action_.find(speaker);
    ctx["characters"] = others;
    ctx["address"] = address;
    ctx["last_action"] = last == last_action_.end() ? labels_for(language_).none : last->second;
  }

  const ParserContext parser_ctx = parser_context(speaker);
  const SolicitOutcome outcome = solicit_turn(cursor, PromptKind::Converse, ctx, &parser_ctx);
  const UsageDelta delta = drain_failures(outcome, PromptKind::Converse, true, speaker, records);

  std::string utterance;
  if (!outcome.exhausted()) {
    utterance = outcome.parsed->response;
    pending_[speaker] = PendingAction{*outcome.parsed->action, outcome.parsed->thought};
  }
  append_history(speaker, "Speak", utterance);
  records.push_back(make_record(RecordKind::Speak, speaker, {{"text", utterance}}, delta));

  // Suspicion and trust scoring of the fresh utterance by every other
  // character; forfeited (empty) turns are not scored.
  if (!outcome.exhausted()) {
    const PromptContext score_ctx{
        {"history", history_snapshot}, {"other_name", speaker}, {"content", utterance}};
    for (size_t i = 0; i < roster_.size(); ++i) {
      const std::string& observer = actor_at(i);
      if (observer == speaker) continue;

      const SolicitOutcome sus =
          solicit_turn(i, PromptKind::SuspicionScore, score_ctx, nullptr);
      const UsageDelta sus_delta =
          drain_failures(sus, PromptKind::SuspicionScore, true, observer, records);
      if (sus.exhausted()) continue;  // skip the pair entirely

      records.push_back(make_record(RecordKind::Score, observer,
                                    {{"channel", "suspicion"},
                                     {"observer", observer},
                                     {"subject", speaker},
                                     {"value", *sus.parsed->score}},
                                    sus_delta));
      tiebreak_suspicion_[speaker] += *sus.parsed->score;

      const SolicitOutcome trust = solicit_turn(i, PromptKind::TrustScore, score_ctx, nullptr);
      const UsageDelta trust_delta =
          drain_failures(trust, PromptKind::TrustScore, true, observer, records);
      if (trust.exhausted()) continue;  // suspicion half stays unpaired

      records.push_back(make_record(RecordKind::Score, observer,
                                    {{"channel", "trust"},
                                     {"observer", observer},
                                     {"subject", speaker},
                                     {"value", *trust.parsed->score}},
                                    trust_delta));
      ledger_.record_scores(observer, speaker, *sus.parsed->score, *trust.parsed->score);
    }
  }

  state_.turn_cursor += 1;
  return records;
}

std::vector<TranscriptRecord> Game::apply_action(const std::string& actor, const Action& action) {
  if (state_.phase != Phase::Interaction ||
      static_cast<size_t>(state_.turn_cursor) >= roster_.size() ||
      actor_at(static_cast<size_t>(state_.turn_cursor)) != actor)
    fail(ErrorCode::NotYourTurn, "'" + actor + "' does not hold the current interaction turn");

  std::vector<TranscriptRecord> records;
  std::string result_note;

  if (const auto* speak = std::get_if<SpeakAction>(&action)) {
    append_history(actor, "Speak", speak->text);
    records.push_back(make_record(RecordKind::Speak, actor, {{"text", speak->text}}));
    result_note = speak->text;
  } else if (const auto* ask = std::get_if<AskAction>(&action)) {
    size_t target_index = roster_.size();
    for (size_t i = 0; i < roster_.size(); ++i)
      if (actor_at(i) == ask->target) target_index = i;
    if (target_index == roster_.size() || ask->target == actor)
      fail(ErrorCode::UnknownTarget, "cannot ask '" + ask->target + "'");

    append_history(actor, "Ask", ask->target + ": " + ask->question);
    records.push_back(make_record(RecordKind::Ask, actor,
                                  {{"target", ask->target}, {"question", ask->question}}));
    action_log_[actor].push_back("\xE3\x80\x90""Ask\xE3\x80\x91\xE3\x80\x90" + ask->target +
                                 "\xE3\x80\x91: " + ask->question);

    // the questioned player is obliged to respond
    ensure_budget(records);
    PromptContext reply_ctx = base_context(ask->target);
    reply_ctx["ask_name"] = actor;
    reply_ctx["ask_content"] = ask->question;
    const SolicitOutcome reply =
        solicit_turn(target_index, PromptKind::AskReply, reply_ctx, nullptr);
    const UsageDelta delta =
        drain_failures(reply, PromptKind::AskReply, true, ask->target, records);
    const std::string answer = reply.exhausted() ? "" : reply.parsed->response;
    append_history(ask->target, "Speak", answer);
    records.push_back(make_record(RecordKind::Answer, ask->target,
                                  {{"asker", actor}, {"text", answer}}, delta));
    result_note = ask->target + ": " + answer;
  } else if (const auto* investigate = std::get_if<InvestigateAction>(&action)) {
    // first unrevealed clue at the location, exact match before
    // case-insensitive
    const Clue* found = nullptr;
    bool location_exists = false;
    for (const int pass : {0, 1}) {
      for (const auto& clue : script_.clues) {
        const bool match = pass == 0 ? clue.location == investigate->location
                                     : iequals(clue.location, investigate->location);
        if (!match) continue;
        location_exists = true;
        if (!state_.revealed_clues.count(clue.id)) {
          found = &clue;
          break;
        }
      }
      if (found || location_exists) break;
    }
    if (!location_exists)
      fail(ErrorCode::UnknownLocation, "no clue at '" + investigate->location + "'");

    action_log_[actor].push_back("\xE3\x80\x90""Investigate\xE3\x80\x91\xE3\x80\x90" +
                                 investigate->location + "\xE3\x80\x91: " + investigate->reason);
    if (found) {
      state_.revealed_clues.insert(found->id);
      revealed_by_[actor].insert(found->id);
      append_history(actor, "Investigate",
                     investigate->reason.empty()
                         ? found->location
                         : found->location + ": " + investigate->reason);
      records.push_back(make_record(RecordKind::Investigate, actor,
                                    {{"location", found->location},
                                     {"reason", investigate->reason},
                                     {"clue_id", found->id}}));
      append_history("Environment", "Clue", found->location + ": " + found->text);
      records.push_back(make_record(RecordKind::ClueRevealed, actor,
                                    {{"clue_id", found->id},
                                     {"location", found->location},
                                     {"text", found->text},
                                     {"is_key", found->is_key}}));
      result_note = "Clue: " + found->text;
    } else {
      // every clue at this location is already revealed
      const std::string note =
          language_ == Language::zh
              ? investigate->location + " 已经被调查过了。"
              : "The " + investigate->location + " has already been examined.";
      append_history(actor, "Speak", note);
      records.push_back(make_record(RecordKind::Speak, actor,
                                    {{"text", note}, {"repeat_of", investigate->location}}));
      result_note = note;
    }
  } else {
    fail(ErrorCode::NotYourTurn, "votes belong to the Voting phase");
  }

  // remember the turn for the actor's next converse prompt
  const auto pending = pending_.find(actor);
  std::string memo;
  if (pending != pending_.end() && !pending->second.thought.empty())
    memo += "### THOUGHT: " + pending->second.thought + "\n";
  memo += result_note;
  last_action_[actor] = memo;

  state_.turn_cursor += 1;
  return records;
}

std::vector<TranscriptRecord> Game::interaction_turn() {
  const auto cursor = static_cast<size_t>(state_.turn_cursor);
  const std::string& actor = actor_at(cursor);
  const auto pending = pending_.find(actor);
  Action action = SpeakAction{""};  // forfeited converse leaves a no-op turn
  if (pending != pending_.end()) action = pending->second.action;
  auto records = apply_action(actor, action);
  if (pending != pending_.end()) pending_.erase(actor);
  return records;
}

std::vector<TranscriptRecord> Game::voting_turn() {
  std::vector<TranscriptRecord> records;
  ensure_budget(records);
  const auto cursor = static_cast<size_t>(state_.turn_cursor);
  const size_t n = roster_.size();
  const bool accusation_pass = cursor < n;
  const size_t index = accusation_pass ? cursor : cursor - n;
  const std::string& actor = actor_at(index);

  PromptContext ctx = base_context(actor);
  ctx["role_list"] = role_list();
  const ParserContext parser_ctx = parser_context(actor);
  const SolicitOutcome outcome = solicit_turn(index, PromptKind::Vote, ctx, &parser_ctx);
  const UsageDelta delta = drain_failures(outcome, PromptKind::Vote, true, actor, records);

  std::string accused;  // empty = forfeited turn
  if (!outcome.exhausted()) accused = std::get<VoteAction>(*outcome.parsed->action).accused;

  if (accusation_pass) {
    state_.accusations[actor] = accused;
    records.push_back(make_record(RecordKind::Accuse, actor, {{"accused", accused}}, delta));
  } else {
    state_.votes[actor] = accused;
    records.push_back(make_record(RecordKind::Vote, actor, {{"accused", accused}}, delta));
  }
  if (!accused.empty())
    action_log_[actor].push_back("\xE3\x80\x90""Vote\xE3\x80\x91: " + accused);

  state_.turn_cursor += 1;
  return records;
}

VotingResult Game::run_voting() const {
  if (voting_result_) return *voting_result_;
  if (state_.phase != Phase::Voting && state_.phase != Phase::Finished)
    fail(ErrorCode::IncompleteVotes, "voting has not started");
  if (state_.accusations.size() < roster_.size() || state_.votes.size() < roster_.size())
    fail(ErrorCode::IncompleteVotes,
         "collected " + std::to_string(state_.votes.size()) + " of " +
             std::to_string(roster_.size()) + " votes");

  std::map<std::string, int> tally;
  for (const auto& [voter, accused] : state_.votes)
    if (!accused.empty()) tally[accused] += 1;
  return resolve_voting(roster_names(), tally, tiebreak_suspicion_, script_.culprit_ids);
}

std::vector<TranscriptRecord> Game::phase_boundary() {
  std::vector<TranscriptRecord> records;
  const Phase from = state_.phase;
  switch (state_.phase) {
    case Phase::Introduction:
      state_.phase = Phase::OpenConversation;
      state_.round = 0;
      break;
    case Phase::OpenConversation:
      state_.phase = Phase::Interaction;
      break;
    case Phase::Interaction:
      if (state_.round + 1 < config_.rounds) {
        state_.round += 1;
        state_.phase = Phase::OpenConversation;
      } else {
        state_.phase = Phase::Voting;
      }
      break;
    case Phase::Voting: {
      voting_result_ = run_voting();
      state_.phase = Phase::Finished;
      nlohmann::json ranking = nlohmann::json::array();
      for (const auto& entry : voting_result_->accused_ranking)
        ranking.push_back({{"character", entry.character},
                           {"votes", entry.votes},
                           {"suspicion", entry.suspicion}});
      records.push_back(make_record(RecordKind::PhaseChange, "Environment",
                                    {{"from", to_string(from)},
                                     {"to", to_string(state_.phase)},
                                     {"final_accused", voting_result_->final_accused},
                                     {"winner", to_string(voting_result_->winner)},
                                     {"ranking", ranking}}));
      state_.turn_cursor = 0;
      return records;
    }
    case Phase::Finished:
      fail(ErrorCode::StorageError, "no boundary out of Finished");
  }
  state_.turn_cursor = 0;
  records.push_back(make_record(RecordKind::PhaseChange, "Environment",
                                {{"from", to_string(from)}, {"to", to_string(state_.phase)}}));
  return records;
}

}  // namespace mirage
