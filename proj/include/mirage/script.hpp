#pragma once

#include <set>
#include <string>
#include <vector>

namespace mirage {

enum class Language { zh, en };
enum class Structure { Single, Multi };
enum class ScriptKind { Orthodox, Unorthodox };
enum class Ending { Close, Open };

const char* to_string(Language v);
const char* to_string(Structure v);
const char* to_string(ScriptKind v);
const char* to_string(Ending v);

struct StageSegment {
  int index = 0;         // 0-based position in the stage list
  int unlock_round = 0;  // round at which this stage's script text joins context
};

struct Clue {
  std::string id;
  std::string location;
  std::string text;
  bool is_key = false;
};

/// The six-part character dossier. `script` holds one entry per stage; Single
/// scripts have exactly one entry.
struct CharacterProfile {
  std::string id;
  std::string story;
  std::vector<std::string> script;
  std::string relationships;
  std::string performance;
  std::string goals;
  std::string abilities;  // may be empty
  std::vector<std::string> private_clues;
};

struct Script {
  std::string id;
  std::string title;
  Language language = Language::en;
  Structure structure = Structure::Single;
  ScriptKind kind = ScriptKind::Orthodox;
  Ending ending = Ending::Close;
  std::vector<StageSegment> stages;
  std::vector<CharacterProfile> characters;
  std::vector<Clue> clues;
  std::string truth;  // confidential: judge-only context
  std::set<std::string> culprit_ids;

  const CharacterProfile* find_character(const std::string& id) const;
  const Clue* find_clue(const std::string& id) const;
  bool is_culprit(const std::string& id) const { return culprit_ids.count(id) > 0; }
  std::vector<std::string> character_ids() const;
  /// Distinct clue locations in script order.
  std::vector<std::string> clue_locations() const;
};

struct Violation {
  std::string code;     // machine-readable, e.g. "DuplicateClueId"
  std::string message;  // human locus
};

struct ScriptStats {
  int agents = 0;
  int clues = 0;
  int stages = 0;
  int words = 0;
};

/// Loads and fully validates a script document. Throws IoError, FormatError
/// (malformed JSON or wrong field shape, with locus) or SchemaViolation
/// (listing every violated invariant).
Script load_script(const std::string& path);

Script script_from_json_text(const std::string& text, const std::string& origin);

/// Pure invariant check; empty result iff the script is well-formed.
std::vector<Violation> validate_script(const Script& script);

std::string script_to_json_text(const Script& script);
void save_script(const Script& script, const std::string& path);

ScriptStats script_stats(const Script& script);

}  // namespace mirage
