#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgcohort::text {

/// Unicode case fold, strip leading '#' from every whitespace-separated
/// token, collapse whitespace runs to one ASCII space and trim. Idempotent.
/// Invalid UTF-8 sequences are replaced by U+FFFD.
std::string normalize(std::string_view text);

/// Word tokens of `text` in order, each case folded.
///
/// A token is a maximal run of letters, digits and combining marks.
/// Apostrophes (U+0027, U+2019) are kept when they sit between two word
/// characters; every other character, hyphens included, is a separator.
/// '#' is a separator too, so "#Keppra" yields "keppra".
std::vector<std::string> word_tokens(std::string_view text);

bool is_valid_utf8(std::string_view text);

/// Number of whitespace-separated chunks in the raw text.
std::size_t whitespace_word_count(std::string_view text);

}  // namespace kgcohort::text
