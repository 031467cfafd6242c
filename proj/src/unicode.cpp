#include "hybridel/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include "hybridel/error.hpp"

namespace hybridel::unicode {

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw ParseError("ill-formed UTF-8", 1, static_cast<std::size_t>(at));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) continue;
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

char32_t fold(char32_t c) {
  return static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
}

std::u32string fold(std::u32string_view text) {
  std::u32string out(text);
  for (auto& c : out) c = fold(c);
  return out;
}

std::string fold_utf8(std::string_view utf8) { return encode(fold(decode(utf8))); }

bool fold_changes_length(char32_t c) {
  UChar src[2];
  int32_t n = 0;
  UBool error = false;
  U16_APPEND(src, n, 2, static_cast<UChar32>(c), error);
  if (error) return false;
  UChar dst[8];
  UErrorCode status = U_ZERO_ERROR;
  const int32_t folded = u_strFoldCase(dst, 8, src, n, U_FOLD_CASE_DEFAULT, &status);
  if (U_FAILURE(status)) return true;
  return u_countChar32(dst, folded) != 1;
}

bool is_alnum(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  return u_isalpha(cp) || u_isdigit(cp);
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_capital(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  return u_isupper(cp) || u_istitle(cp);
}

}  // namespace hybridel::unicode
