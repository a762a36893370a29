#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace darkcorpus {

// Text here is UTF-8. Bytes that do not form a valid sequence are treated as
// one opaque character each so that no input can make a routine fail.

struct Utf8Char {
    char32_t scalar{0};      // decoded scalar, or the raw byte value for invalid sequences
    std::size_t length{1};   // bytes consumed
    bool valid{true};
};

// Decodes the character starting at text[pos]. pos must be < text.size().
Utf8Char utf8_decode(std::string_view text, std::size_t pos);

// Number of characters (valid scalars plus one per stray byte).
std::uint64_t utf8_char_count(std::string_view text);

// Unicode whitespace, the set used for word splitting and whitespace
// truncation: ASCII space and controls TAB..CR, NEL, NBSP, and the
// larger space code points (U+1680, U+2000..200A, U+2028, U+2029,
// U+202F, U+205F, U+3000).
bool is_unicode_space(char32_t scalar);

inline bool is_ascii_space(char c) {
    return c == ' ' || (c >= '\t' && c <= '\r');
}
inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_ascii_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_alnum(char c) { return is_ascii_digit(c) || is_ascii_alpha(c); }
inline bool is_hex_digit(char c) {
    return is_ascii_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

char ascii_lower(char c);

// Lowercases ASCII and Latin-1 letters (including the decoded forms of
// accented characters up to U+00FF). Characters above that range pass
// through unchanged; the preprocessed corpus never contains them.
std::string lower_latin1(std::string_view text);

// True if a case-insensitive ASCII comparison of text[pos..] begins with prefix.
bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix);

// 64-bit string hash (FNV-1a with a splitmix64 finalizer). Stable across
// platforms and runs; used for shingle hashing and seed derivation.
std::uint64_t hash64(std::string_view data);

// splitmix64 mixing step, also the generator used to derive stage seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace darkcorpus
