#include "mirage/transcript.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mirage/error.hpp"
#include "mirage/text.hpp"

namespace mirage {

using nlohmann::json;

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Introduction: return "Introduction";
    case Phase::OpenConversation: return "OpenConversation";
    case Phase::Interaction: return "Interaction";
    case Phase::Voting: return "Voting";
    case Phase::Finished: return "Finished";
  }
  return "?";
}

Phase phase_from_string(const std::string& name) {
  for (const Phase p : {Phase::Introduction, Phase::OpenConversation, Phase::Interaction,
                        Phase::Voting, Phase::Finished})
    if (name == to_string(p)) return p;
  fail(ErrorCode::CorruptTranscript, "unknown phase '" + name + "'");
}

const char* to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::Speak: return "Speak";
    case RecordKind::Ask: return "Ask";
    case RecordKind::Answer: return "Answer";
    case RecordKind::Investigate: return "Investigate";
    case RecordKind::ClueRevealed: return "ClueRevealed";
    case RecordKind::Score: return "Score";
    case RecordKind::Summary: return "Summary";
    case RecordKind::Accuse: return "Accuse";
    case RecordKind::Vote: return "Vote";
    case RecordKind::PhaseChange: return "PhaseChange";
    case RecordKind::Failure: return "Failure";
  }
  return "?";
}

RecordKind record_kind_from_string(const std::string& name) {
  for (const RecordKind k :
       {RecordKind::Speak, RecordKind::Ask, RecordKind::Answer, RecordKind::Investigate,
        RecordKind::ClueRevealed, RecordKind::Score, RecordKind::Summary, RecordKind::Accuse,
        RecordKind::Vote, RecordKind::PhaseChange, RecordKind::Failure})
    if (name == to_string(k)) return k;
  fail(ErrorCode::CorruptTranscript, "unknown record kind '" + name + "'");
}

json TranscriptRecord::to_json() const {
  json usage_doc{{"env_tokens", usage.env_tokens},
                 {"envs", usage.envs},
                 {"user_tokens", usage.user_tokens},
                 {"users", usage.users}};
  return json{{"seq", seq},         {"round", round},   {"phase", to_string(phase)},
              {"actor", actor},     {"kind", to_string(kind)}, {"payload", payload},
              {"usage", usage_doc}};
}

TranscriptRecord TranscriptRecord::from_json(const json& doc) {
  TranscriptRecord r;
  try {
    r.seq = doc.at("seq").get<std::uint64_t>();
    r.round = doc.at("round").get<int>();
    r.phase = phase_from_string(doc.at("phase").get<std::string>());
    r.actor = doc.at("actor").get<std::string>();
    r.kind = record_kind_from_string(doc.at("kind").get<std::string>());
    r.payload = doc.at("payload");
    const auto& u = doc.at("usage");
    r.usage.env_tokens = u.at("env_tokens").get<long>();
    r.usage.envs = u.at("envs").get<long>();
    r.usage.user_tokens = u.at("user_tokens").get<long>();
    r.usage.users = u.at("users").get<long>();
  } catch (const json::exception& e) {
    fail(ErrorCode::CorruptTranscript, std::string("bad record: ") + e.what());
  }
  return r;
}

std::string TranscriptRecord::canonical_line() const { return to_json().dump(); }

void write_transcript(const std::string& path, const std::vector<TranscriptRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::StorageError, "cannot open " + path + " for writing");
  for (const auto& r : records) out << r.canonical_line() << "\n";
  if (!out) fail(ErrorCode::StorageError, "write failed on " + path);
}

std::vector<TranscriptRecord> parse_transcript_text(const std::string& text,
                                                    const std::string& origin) {
  std::vector<TranscriptRecord> records;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::CorruptTranscript,
           origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
    records.push_back(TranscriptRecord::from_json(doc));
  }
  for (size_t i = 0; i < records.size(); ++i)
    if (records[i].seq != i)
      fail(ErrorCode::CorruptTranscript, origin + ": seq gap at record " + std::to_string(i) +
                                             " (seq " + std::to_string(records[i].seq) + ")");
  return records;
}

std::vector<TranscriptRecord> read_transcript(const std::string& path) {
  return parse_transcript_text(read_text_file(path), path);
}

std::string transcript_hash(const std::vector<TranscriptRecord>& records) {
  std::string bytes;
  for (const auto& r : records) {
    bytes += r.canonical_line();
    bytes += '\n';
  }
  return sha256_hex(bytes);
}

// ------------------------------------------------------------------ sha256
// Compact FIPS 180-4 implementation; reproducible hashing only.

namespace {

constexpr std::array<std::uint32_t, 64> kRound = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::string data = bytes;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(bytes.size()) * 8;
  data.push_back('\x80');
  while (data.size() % 64 != 56) data.push_back('\0');
  for (int i = 7; i >= 0; --i) data.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xFF));

  std::array<std::uint32_t, 64> w{};
  for (size_t block = 0; block < data.size(); block += 64) {
    for (int t = 0; t < 16; ++t) {
      w[t] = (static_cast<std::uint32_t>(static_cast<unsigned char>(data[block + 4 * t])) << 24) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(data[block + 4 * t + 1])) << 16) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(data[block + 4 * t + 2])) << 8) |
             static_cast<std::uint32_t>(static_cast<unsigned char>(data[block + 4 * t + 3]));
    }
    for (int t = 16; t < 64; ++t) {
      const std::uint32_t s0 = rotr(w[t - 15], 7) ^ rotr(w[t - 15], 18) ^ (w[t - 15] >> 3);
      const std::uint32_t s1 = rotr(w[t - 2], 17) ^ rotr(w[t - 2], 19) ^ (w[t - 2] >> 10);
      w[t] = w[t - 16] + s0 + w[t - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, hh] = h;
    for (int t = 0; t < 64; ++t) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t temp1 = hh + s1 + ch + kRound[t] + w[t];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t temp2 = s0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + temp1;
      d = c;
      c = b;
      b = a;
      a = temp1 + temp2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (const std::uint32_t word : h)
    for (int i = 7; i >= 0; --i) out.push_back(hex[(word >> (4 * i)) & 0xF]);
  return out;
}

}  // namespace mirage
