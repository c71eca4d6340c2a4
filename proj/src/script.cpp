#include "mirage/script.hpp"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

#include "mirage/error.hpp"
#include "mirage/text.hpp"

namespace mirage {

using nlohmann::json;

const char* to_string(Language v) { return v == Language::zh ? "zh" : "en"; }
const char* to_string(Structure v) { return v == Structure::Single ? "Single" : "Multi"; }
const char* to_string(ScriptKind v) { return v == ScriptKind::Orthodox ? "Orthodox" : "Unorthodox"; }
const char* to_string(Ending v) { return v == Ending::Close ? "Close" : "Open"; }

const CharacterProfile* Script::find_character(const std::string& id) const {
  for (const auto& c : characters)
    if (c.id == id) return &c;
  return nullptr;
}

const Clue* Script::find_clue(const std::string& id) const {
  for (const auto& c : clues)
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<std::string> Script::character_ids() const {
  std::vector<std::string> ids;
  ids.reserve(characters.size());
  for (const auto& c : characters) ids.push_back(c.id);
  return ids;
}

std::vector<std::string> Script::clue_locations() const {
  std::vector<std::string> locations;
  for (const auto& c : clues)
    if (std::find(locations.begin(), locations.end(), c.location) == locations.end())
      locations.push_back(c.location);
  return locations;
}

namespace {

template <typename T>
T parse_enum(const json& doc, const std::string& key,
             std::initializer_list<std::pair<const char*, T>> values,
             const std::string& origin) {
  if (!doc.contains(key) || !doc[key].is_string())
    fail(ErrorCode::FormatError, origin + ": field '" + key + "' must be a string");
  const std::string raw = doc[key].get<std::string>();
  for (const auto& [name, value] : values)
    if (raw == name) return value;
  fail(ErrorCode::FormatError, origin + ": field '" + key + "' has unknown value '" + raw + "'");
}

std::string require_string(const json& doc, const std::string& key, const std::string& origin) {
  if (!doc.contains(key) || !doc[key].is_string())
    fail(ErrorCode::FormatError, origin + ": field '" + key + "' must be a string");
  return doc[key].get<std::string>();
}

int require_int(const json& doc, const std::string& key, const std::string& origin) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    fail(ErrorCode::FormatError, origin + ": field '" + key + "' must be an integer");
  return doc[key].get<int>();
}

const json& require_array(const json& doc, const std::string& key, const std::string& origin) {
  if (!doc.contains(key) || !doc[key].is_array())
    fail(ErrorCode::FormatError, origin + ": field '" + key + "' must be an array");
  return doc[key];
}

CharacterProfile parse_character(const json& doc, const std::string& origin) {
  CharacterProfile c;
  c.id = require_string(doc, "id", origin);
  const std::string locus = origin + " character '" + c.id + "'";
  c.story = require_string(doc, "story", locus);
  // `script` is either one text (Single) or one text per stage (Multi).
  if (!doc.contains("script"))
    fail(ErrorCode::FormatError, locus + ": missing field 'script'");
  if (doc["script"].is_string()) {
    c.script.push_back(doc["script"].get<std::string>());
  } else if (doc["script"].is_array()) {
    for (const auto& part : doc["script"]) {
      if (!part.is_string())
        fail(ErrorCode::FormatError, locus + ": 'script' entries must be strings");
      c.script.push_back(part.get<std::string>());
    }
  } else {
    fail(ErrorCode::FormatError, locus + ": 'script' must be a string or array of strings");
  }
  c.relationships = require_string(doc, "relationships", locus);
  c.performance = require_string(doc, "performance", locus);
  c.goals = require_string(doc, "goals", locus);
  c.abilities = doc.contains("abilities") ? require_string(doc, "abilities", locus) : "";
  if (doc.contains("private_clues")) {
    for (const auto& id : require_array(doc, "private_clues", locus)) {
      if (!id.is_string())
        fail(ErrorCode::FormatError, locus + ": 'private_clues' entries must be strings");
      c.private_clues.push_back(id.get<std::string>());
    }
  }
  return c;
}

}  // namespace

Script script_from_json_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::FormatError, origin + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::FormatError, origin + ": document must be a JSON object");

  Script s;
  s.id = require_string(doc, "id", origin);
  s.title = require_string(doc, "title", origin);
  s.language = parse_enum<Language>(doc, "language",
                                    {{"zh", Language::zh}, {"en", Language::en}}, origin);
  s.structure = parse_enum<Structure>(
      doc, "structure", {{"Single", Structure::Single}, {"Multi", Structure::Multi}}, origin);
  s.kind = parse_enum<ScriptKind>(
      doc, "kind", {{"Orthodox", ScriptKind::Orthodox}, {"Unorthodox", ScriptKind::Unorthodox}},
      origin);
  s.ending =
      parse_enum<Ending>(doc, "ending", {{"Close", Ending::Close}, {"Open", Ending::Open}}, origin);

  for (const auto& stage : require_array(doc, "stages", origin)) {
    StageSegment seg;
    seg.index = require_int(stage, "index", origin + " stages");
    seg.unlock_round = require_int(stage, "unlock_round", origin + " stages");
    s.stages.push_back(seg);
  }
  for (const auto& ch : require_array(doc, "characters", origin))
    s.characters.push_back(parse_character(ch, origin));
  for (const auto& cl : require_array(doc, "clues", origin)) {
    Clue clue;
    clue.id = require_string(cl, "id", origin + " clues");
    const std::string locus = origin + " clue '" + clue.id + "'";
    clue.location = require_string(cl, "location", locus);
    clue.text = require_string(cl, "text", locus);
    clue.is_key = cl.contains("is_key") && cl["is_key"].is_boolean() && cl["is_key"].get<bool>();
    s.clues.push_back(clue);
  }
  s.truth = require_string(doc, "truth", origin);
  for (const auto& id : require_array(doc, "culprit_ids", origin)) {
    if (!id.is_string())
      fail(ErrorCode::FormatError, origin + ": 'culprit_ids' entries must be strings");
    s.culprit_ids.insert(id.get<std::string>());
  }

  const auto violations = validate_script(s);
  if (!violations.empty()) {
    std::string msg = origin + ":";
    for (const auto& v : violations) msg += "\n  [" + v.code + "] " + v.message;
    fail(ErrorCode::SchemaViolation, msg);
  }
  return s;
}

Script load_script(const std::string& path) {
  return script_from_json_text(read_text_file(path), path);
}

std::vector<Violation> validate_script(const Script& s) {
  std::vector<Violation> out;
  const auto add = [&out](std::string code, std::string message) {
    out.push_back({std::move(code), std::move(message)});
  };

  if (s.characters.size() < 2)
    add("TooFewCharacters", "a script needs at least 2 characters, got " +
                                std::to_string(s.characters.size()));
  std::unordered_set<std::string> char_ids;
  for (const auto& c : s.characters) {
    if (!char_ids.insert(c.id).second)
      add("DuplicateCharacterId", "character id '" + c.id + "' appears more than once");
    if (c.story.empty()) add("EmptyPart", "character '" + c.id + "': part 'story' is empty");
    if (c.script.empty() ||
        std::all_of(c.script.begin(), c.script.end(), [](const auto& t) { return t.empty(); }))
      add("EmptyPart", "character '" + c.id + "': part 'script' is empty");
    if (c.relationships.empty())
      add("EmptyPart", "character '" + c.id + "': part 'relationships' is empty");
    if (c.performance.empty())
      add("EmptyPart", "character '" + c.id + "': part 'performance' is empty");
    if (c.goals.empty()) add("EmptyPart", "character '" + c.id + "': part 'goals' is empty");
    if (c.script.size() != s.stages.size())
      add("StageCountMismatch", "character '" + c.id + "': " + std::to_string(c.script.size()) +
                                    " script entries for " + std::to_string(s.stages.size()) +
                                    " stages");
  }

  if (s.culprit_ids.empty()) add("EmptyCulpritSet", "culprit_ids must not be empty");
  for (const auto& id : s.culprit_ids)
    if (!char_ids.count(id)) add("UnknownCulprit", "culprit id '" + id + "' is not a character");
  if (!s.characters.empty() && s.culprit_ids.size() >= s.characters.size())
    add("NoCivilian", "every character is a culprit; at least one civilian is required");

  std::unordered_set<std::string> clue_ids;
  for (const auto& clue : s.clues) {
    if (!clue_ids.insert(clue.id).second)
      add("DuplicateClueId", "clue id '" + clue.id + "' appears more than once");
    if (clue.location.empty()) add("EmptyClueLocation", "clue '" + clue.id + "' has no location");
  }
  for (const auto& c : s.characters)
    for (const auto& id : c.private_clues)
      if (!clue_ids.count(id))
        add("UnknownPrivateClue",
            "character '" + c.id + "' references unknown private clue '" + id + "'");

  if (s.stages.empty()) add("NoStages", "a script needs at least one stage");
  const bool single = s.structure == Structure::Single;
  if (single != (s.stages.size() == 1))
    add("StructureStageMismatch", std::string(to_string(s.structure)) + " script with " +
                                      std::to_string(s.stages.size()) + " stages");
  for (size_t i = 0; i < s.stages.size(); ++i) {
    if (s.stages[i].index != static_cast<int>(i))
      add("BadStageIndex", "stage at position " + std::to_string(i) + " has index " +
                               std::to_string(s.stages[i].index));
    if (i == 0 && s.stages[i].unlock_round != 0)
      add("BadStageUnlock", "stage 0 must unlock at round 0");
    if (i > 0 && s.stages[i].unlock_round <= s.stages[i - 1].unlock_round)
      add("BadStageUnlock", "stage " + std::to_string(i) + " unlock_round must exceed stage " +
                                std::to_string(i - 1) + "'s");
  }

  return out;
}

std::string script_to_json_text(const Script& s) {
  json doc;
  doc["id"] = s.id;
  doc["title"] = s.title;
  doc["language"] = to_string(s.language);
  doc["structure"] = to_string(s.structure);
  doc["kind"] = to_string(s.kind);
  doc["ending"] = to_string(s.ending);
  doc["stages"] = json::array();
  for (const auto& st : s.stages)
    doc["stages"].push_back({{"index", st.index}, {"unlock_round", st.unlock_round}});
  doc["characters"] = json::array();
  for (const auto& c : s.characters) {
    json jc;
    jc["id"] = c.id;
    jc["story"] = c.story;
    if (c.script.size() == 1)
      jc["script"] = c.script.front();
    else
      jc["script"] = c.script;
    jc["relationships"] = c.relationships;
    jc["performance"] = c.performance;
    jc["goals"] = c.goals;
    jc["abilities"] = c.abilities;
    jc["private_clues"] = c.private_clues;
    doc["characters"].push_back(jc);
  }
  doc["clues"] = json::array();
  for (const auto& cl : s.clues)
    doc["clues"].push_back(
        {{"id", cl.id}, {"location", cl.location}, {"text", cl.text}, {"is_key", cl.is_key}});
  doc["truth"] = s.truth;
  doc["culprit_ids"] = s.culprit_ids;
  return doc.dump(2) + "\n";
}

void save_script(const Script& script, const std::string& path) {
  write_text_file(path, script_to_json_text(script));
}

ScriptStats script_stats(const Script& s) {
  ScriptStats stats;
  stats.agents = static_cast<int>(s.characters.size());
  stats.clues = static_cast<int>(s.clues.size());
  stats.stages = static_cast<int>(s.stages.size());
  int words = 0;
  for (const auto& c : s.characters) {
    words += count_tokens(c.story);
    for (const auto& part : c.script) words += count_tokens(part);
    words += count_tokens(c.relationships);
    words += count_tokens(c.performance);
    words += count_tokens(c.goals);
    words += count_tokens(c.abilities);
  }
  for (const auto& cl : s.clues) words += count_tokens(cl.text);
  words += count_tokens(s.truth);
  stats.words = words;
  return stats;
}

}  // namespace mirage
