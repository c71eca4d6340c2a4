#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace mirage {

enum class Phase { Introduction, OpenConversation, Interaction, Voting, Finished };
const char* to_string(Phase phase);
Phase phase_from_string(const std::string& name);

enum class RecordKind {
  Speak,
  Ask,
  Answer,
  Investigate,
  ClueRevealed,
  Score,
  Summary,
  Accuse,
  Vote,
  PhaseChange,
  Failure,
};
const char* to_string(RecordKind kind);
RecordKind record_kind_from_string(const std::string& name);

struct UsageDelta {
  long env_tokens = 0;
  long envs = 0;
  long user_tokens = 0;
  long users = 0;
};

/// One transcript line. Canonical serialization carries no wall-clock time,
/// so equal games hash equal.
struct TranscriptRecord {
  std::uint64_t seq = 0;
  int round = 0;
  Phase phase = Phase::Introduction;
  std::string actor;
  RecordKind kind = RecordKind::Speak;
  nlohmann::json payload;  // kind-specific object
  UsageDelta usage;

  nlohmann::json to_json() const;
  static TranscriptRecord from_json(const nlohmann::json& doc);
  std::string canonical_line() const;
};

void write_transcript(const std::string& path, const std::vector<TranscriptRecord>& records);

/// Parses a JSONL transcript; throws CorruptTranscript on malformed lines or
/// a seq that is not dense from 0.
std::vector<TranscriptRecord> read_transcript(const std::string& path);
std::vector<TranscriptRecord> parse_transcript_text(const std::string& text,
                                                    const std::string& origin);

/// SHA-256 over the canonical line serialization, hex-encoded.
std::string transcript_hash(const std::vector<TranscriptRecord>& records);

std::string sha256_hex(const std::string& bytes);

}  // namespace mirage
