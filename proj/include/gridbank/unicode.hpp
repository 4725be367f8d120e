#ifndef GRIDBANK_UNICODE_HPP
#define GRIDBANK_UNICODE_HPP

#include <cstddef>
#include <string>
#include <string_view>

namespace gridbank {

// Minimal UTF-8 handling. All comparisons in the library operate on
// Unicode scalar values, never on grapheme clusters: historical combining
// characters (e.g. the superscript-e diacritic) count as separate scalars.

// Returns true iff bytes form valid UTF-8. On failure *bad_offset (if
// non-null) receives the byte offset of the first offending byte.
bool valid_utf8(std::string_view bytes, std::size_t* bad_offset = nullptr);

// Throws EncodingError naming the byte offset on invalid input.
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view scalars);

// Number of scalar values in a valid UTF-8 string.
std::size_t scalar_count(std::string_view bytes);

// Throws EncodingError with `what_name` in the message if bytes are not UTF-8.
void require_utf8(std::string_view bytes, std::string_view what_name);

// ASCII + Latin-1 case folding, which covers German umlauts. Anything
// outside that range is returned unchanged.
char32_t to_lower_scalar(char32_t cp);
bool is_upper_scalar(char32_t cp);
std::u32string to_lower(std::u32string_view scalars);
std::string to_lower_utf8(std::string_view bytes);

} // namespace gridbank

#endif
