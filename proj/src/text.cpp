#include "mirage/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mirage/error.hpp"

namespace mirage {

namespace {

bool is_space_codepoint(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v' || cp == 0x3000;  // ideographic space
}

// Decodes one UTF-8 codepoint starting at `i`; advances `i` past it. On a
// malformed byte, consumes exactly that byte and reports it as U+FFFD so the
// caller treats it as ordinary run content.
char32_t next_codepoint(std::string_view s, size_t& i, size_t& byte_len) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  size_t len = 1;
  char32_t cp = b0;
  if (b0 >= 0xF0) {
    len = 4;
    cp = b0 & 0x07u;
  } else if (b0 >= 0xE0) {
    len = 3;
    cp = b0 & 0x0Fu;
  } else if (b0 >= 0xC0) {
    len = 2;
    cp = b0 & 0x1Fu;
  } else if (b0 >= 0x80) {
    // stray continuation byte
    i += 1;
    byte_len = 1;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    i += 1;
    byte_len = 1;
    return 0xFFFD;
  }
  for (size_t k = 1; k < len; ++k) {
    const auto bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0u) != 0x80u) {
      i += 1;
      byte_len = 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (bk & 0x3Fu);
  }
  i += len;
  byte_len = len;
  return cp;
}

}  // namespace

bool is_cjk_codepoint(char32_t cp) {
  return (cp >= 0x3400 && cp <= 0x4DBF) ||   // CJK extension A
         (cp >= 0x4E00 && cp <= 0x9FFF) ||   // CJK unified ideographs
         (cp >= 0xF900 && cp <= 0xFAFF);     // CJK compatibility ideographs
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string run;
  size_t i = 0;
  while (i < text.size()) {
    const size_t start = i;
    size_t byte_len = 0;
    const char32_t cp = next_codepoint(text, i, byte_len);
    if (is_space_codepoint(cp)) {
      if (!run.empty()) {
        tokens.push_back(std::move(run));
        run.clear();
      }
    } else if (is_cjk_codepoint(cp)) {
      if (!run.empty()) {
        tokens.push_back(std::move(run));
        run.clear();
      }
      tokens.emplace_back(text.substr(start, byte_len));
    } else {
      run.append(text.substr(start, byte_len));
    }
  }
  if (!run.empty()) tokens.push_back(std::move(run));
  return tokens;
}

int count_tokens(std::string_view text) {
  int count = 0;
  bool in_run = false;
  size_t i = 0;
  while (i < text.size()) {
    size_t byte_len = 0;
    const char32_t cp = next_codepoint(text, i, byte_len);
    if (is_space_codepoint(cp)) {
      in_run = false;
    } else if (is_cjk_codepoint(cp)) {
      in_run = false;
      ++count;
    } else if (!in_run) {
      in_run = true;
      ++count;
    }
  }
  return count;
}

std::string trim(std::string_view text) {
  size_t b = 0;
  size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorCode::IoError, "read failed on " + path);
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::IoError, "write failed on " + path);
}

}  // namespace mirage
