#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mirage {

// Shared tokenization heuristic: a token is either a single CJK ideograph or a
// maximal whitespace-free run of non-CJK characters. Used for token budgets,
// usage accounting, word stats and Rouge-L.

bool is_cjk_codepoint(char32_t cp);

/// Splits UTF-8 text into tokens under the heuristic above. Invalid UTF-8
/// bytes are kept verbatim inside the surrounding run; this function never
/// throws on arbitrary input.
std::vector<std::string> tokenize(std::string_view text);

/// Token count under the same heuristic; count_tokens("") == 0.
int count_tokens(std::string_view text);

std::string trim(std::string_view text);

bool iequals(std::string_view a, std::string_view b);

/// Lowercases ASCII only; leaves multi-byte sequences untouched.
std::string ascii_lower(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace mirage
