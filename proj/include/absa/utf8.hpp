#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace absa::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes the codepoint starting at byte `pos`. Advances `pos` past it.
/// Malformed bytes decode as U+FFFD, consuming one byte.
char32_t decode(std::string_view text, std::size_t& pos);

void append(std::string& out, char32_t cp);

std::size_t encoded_size(char32_t cp);

/// Splits a UTF-8 string into codepoints paired with their byte offsets.
struct CodepointRun {
    std::vector<char32_t> cps;
    std::vector<std::size_t> offsets;  // byte offset of each codepoint
};
CodepointRun decode_all(std::string_view text);

std::size_t count_codepoints(std::string_view text);

bool is_ascii_space(char32_t cp);
bool is_space(char32_t cp);
bool is_control(char32_t cp);
bool is_latin_letter(char32_t cp);
bool is_sinhala(char32_t cp);
bool is_digit(char32_t cp);
bool is_letter(char32_t cp);

/// True for codepoints that belong inside word tokens: ASCII alphanumerics,
/// Sinhala, ZWJ/ZWNJ joiners, and other non-punctuation non-ASCII letters.
bool is_word_char(char32_t cp);

char32_t to_lower(char32_t cp);

/// Canonical composition for the Sinhala block (the only non-Latin script
/// this engine processes). Pairs of adjacent vowel-sign codepoints compose
/// into their precomposed forms; chains compose fully.
char32_t compose_pair(char32_t a, char32_t b);

}  // namespace absa::utf8
