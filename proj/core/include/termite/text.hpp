#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace termite {

/// Strict UTF-8 validity check (rejects overlong forms, surrogates,
/// codepoints above U+10FFFF, truncated sequences).
bool utf8_valid(std::string_view s);

/// Decodes the codepoint starting at byte offset i. Sets len to the number
/// of bytes consumed. Invalid input yields U+FFFD with len 1.
std::uint32_t utf8_decode(std::string_view s, std::size_t i, std::size_t& len);

std::string utf8_encode(std::uint32_t cp);

/// Case-folds a single codepoint for French text. ASCII A-Z and the
/// Latin-1 uppercase block map to lowercase; Œ and Ÿ map to their
/// lowercase forms. Every mapping preserves UTF-8 byte length, so folded
/// strings stay offset-aligned with their originals.
std::uint32_t fold_cp(std::uint32_t cp);

/// Byte-length-preserving lowercase of a whole string.
std::string fold_french(std::string_view s);

/// Word constituent: ASCII alphanumerics plus Latin letters in
/// U+00C0..U+024F (the multiplication and division signs excluded).
bool is_word_cp(std::uint32_t cp);

}  // namespace termite
