#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mirage/engine.hpp"
#include "mirage/metrics.hpp"

namespace mirage {

/// Stable part keys, in dossier order: story, script, relationships,
/// performance, goals, abilities.
const std::vector<std::string>& script_part_keys();

/// Localized display name used for the {script_part} placeholder.
std::string script_part_display(const std::string& part_key, Language lang);

/// Stable ability keys: reasoning, communication, observation, innovation,
/// role_play.
const std::vector<std::string>& ability_keys();
std::string ability_display(const std::string& ability_key, Language lang);

struct AbilityJudgeResult {
  AbilityScores scores;
  std::vector<TranscriptRecord> records;  // Score + Failure, sequenced
};

/// One AbilityJudge solicitation per ability; the judge context includes the
/// solved case (truth). Out-of-range integers are rerun; exhaustion throws
/// RerunExhausted.
AbilityJudgeResult judge_abilities(const Game& game, const std::string& character,
                                   AgentBackend& judge, RerunPolicy& policy,
                                   UsageCounters& counters, std::uint64_t& next_seq);

struct ReconstructedPart {
  std::string part;  // stable key
  RougeScore rouge;
};

struct ReconstructionResult {
  std::vector<ReconstructedPart> parts;
  std::vector<TranscriptRecord> records;
};

/// One Reconstruction solicitation per nonempty dossier part, scored with
/// Rouge-L against the stored part text. The judge context excludes the
/// truth and the character's private clues.
ReconstructionResult reconstruct_and_score(const Game& game, const std::string& character,
                                           AgentBackend& judge, RerunPolicy& policy,
                                           UsageCounters& counters, std::uint64_t& next_seq);

}  // namespace mirage
