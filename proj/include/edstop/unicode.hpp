#ifndef EDSTOP_UNICODE_HPP
#define EDSTOP_UNICODE_HPP

#include <string>
#include <string_view>

// Minimal UTF-8 codec and codepoint classification for the scripts that
// actually show up in the corpora: Arabic, Latin, a handful of others,
// digits, whitespace. Everything else is treated as symbol/punctuation.

namespace edstop::uni {

// Strict decode; throws std::runtime_error naming the byte offset on
// invalid input (overlong forms, surrogates, truncated sequences).
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);
bool is_digit(char32_t cp);

// Combining short-vowel marks U+064B..U+0652 plus superscript alef U+0670.
bool is_arabic_diacritic(char32_t cp);

inline bool is_tatweel(char32_t cp) { return cp == 0x0640; }

// Letters of the Arabic script blocks U+0600..U+06FF and U+0750..U+077F,
// excluding digits, diacritics, tatweel and punctuation.
bool is_arabic_letter(char32_t cp);

// Letters of any script we recognize (Arabic, Latin, Greek, Cyrillic,
// Hebrew, kana, CJK ideographs).
bool is_letter(char32_t cp);

}  // namespace edstop::uni

#endif
