#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Minimal, locale-independent UTF-8 and character-class helpers.
//
// Classification tables cover the scripts that show up in survey text
// (Latin, Greek, Cyrillic, Hebrew, Arabic, Devanagari, Thai, CJK, Kana,
// Hangul). They are fixed in code so results never depend on the host locale.
namespace surveymon::utf8 {

/// Decodes UTF-8; invalid sequences decode to U+FFFD, one per offending byte.
std::u32string decode(std::string_view text);

void append(std::u32string_view cps, std::string& out);
void append(char32_t cp, std::string& out);
std::string encode(std::u32string_view cps);

/// Number of Unicode scalar values.
std::size_t length(std::string_view text);

bool is_space(char32_t cp);
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
/// Combining marks attach to the preceding letter.
bool is_mark(char32_t cp);
inline bool is_alnum(char32_t cp) { return is_letter(cp) || is_digit(cp) || is_mark(cp); }

/// Simple one-to-one lowercase mapping for ASCII, Latin-1, Latin Extended-A,
/// Greek and Cyrillic. Everything else maps to itself.
char32_t fold(char32_t cp);
std::string fold(std::string_view text);

/// Strips leading/trailing whitespace (Unicode-aware).
std::string_view trim(std::string_view text);

/// Trims and replaces every internal whitespace run with one ASCII space.
std::string collapse_whitespace(std::string_view text);

}  // namespace surveymon::utf8
