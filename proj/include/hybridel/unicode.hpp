#pragma once

// Text in this library is UTF-8 at the edges and UTF-32 inside the linkers,
// so that every offset counts Unicode scalar values.

#include <string>
#include <string_view>

namespace hybridel::unicode {

/// Throws ParseError (line 1, byte offset) on ill-formed UTF-8.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);

/// Simple (1:1) Unicode case folding, locale independent.
char32_t fold(char32_t c);
std::u32string fold(std::u32string_view text);
std::string fold_utf8(std::string_view utf8);

/// True when the full case folding of `c` is not a single code point
/// (e.g. U+00DF, U+0130); such characters are rejected in case-insensitive aliases.
bool fold_changes_length(char32_t c);

/// Unicode letter or decimal digit.
bool is_alnum(char32_t c);
bool is_space(char32_t c);
/// Uppercase or titlecase letter.
bool is_capital(char32_t c);

}  // namespace hybridel::unicode
