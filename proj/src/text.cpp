#include "kgcohort/text.hpp"

#include <unicode/uchar.h>
#include <unicode/ustring.h>
#include <unicode/utf16.h>
#include <unicode/utf8.h>

namespace kgcohort::text {
namespace {

constexpr UChar32 kReplacement = 0xFFFD;

// Decodes the code point starting at `i`, advancing `i`.
UChar32 next_code_point(std::string_view s, std::size_t& i) {
  UChar32 c = 0;
  int32_t pos = static_cast<int32_t>(i);
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos,
          static_cast<int32_t>(s.size()), c);
  i = static_cast<std::size_t>(pos);
  return c < 0 ? kReplacement : c;
}

void append_utf8(std::string& out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (error) {
    len = 0;
    U8_APPEND_UNSAFE(buf, len, kReplacement);
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

// Full case folding, so that e.g. U+00DF folds to "ss".
void append_folded(std::string& out, UChar32 c) {
  UChar src[U16_MAX_LENGTH], dst[8];
  int32_t n = 0;
  U16_APPEND_UNSAFE(src, n, c);
  UErrorCode status = U_ZERO_ERROR;
  int32_t len = u_strFoldCase(dst, 8, src, n, U_FOLD_CASE_DEFAULT, &status);
  if (U_FAILURE(status)) {
    append_utf8(out, u_foldCase(c, U_FOLD_CASE_DEFAULT));
    return;
  }
  for (int32_t k = 0; k < len;) {
    UChar32 f;
    U16_NEXT(dst, k, len, f);
    append_utf8(out, f);
  }
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c); }

bool is_word_char(UChar32 c) {
  return u_isalnum(c) || (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

bool is_apostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_token = false;
  bool pending_space = false;
  std::size_t i = 0;
  while (i < text.size()) {
    UChar32 c = next_code_point(text, i);
    if (is_space(c)) {
      if (in_token) pending_space = true;
      in_token = false;
      continue;
    }
    if (!in_token) {
      if (c == '#') continue;  // still inside the leading-'#' run
      if (pending_space) out.push_back(' ');
      pending_space = false;
      in_token = true;
    }
    append_folded(out, c);
  }
  return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  // Apostrophe seen after a word character; committed only if another word
  // character follows.
  bool held_apostrophe = false;
  UChar32 held = 0;
  std::size_t i = 0;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
    held_apostrophe = false;
  };
  while (i < text.size()) {
    UChar32 c = next_code_point(text, i);
    if (is_word_char(c)) {
      if (held_apostrophe) {
        append_utf8(current, held);
        held_apostrophe = false;
      }
      append_folded(current, c);
    } else if (is_apostrophe(c) && !current.empty() && !held_apostrophe) {
      held_apostrophe = true;
      held = c;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

bool is_valid_utf8(std::string_view text) {
  int32_t i = 0;
  const auto len = static_cast<int32_t>(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  while (i < len) {
    UChar32 c = 0;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

std::size_t whitespace_word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  std::size_t i = 0;
  while (i < text.size()) {
    UChar32 c = next_code_point(text, i);
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

}  // namespace kgcohort::text
