#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

Utf8Char utf8_decode(std::string_view text, std::size_t pos) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    unsigned char b0 = bytes[pos];
    if (b0 < 0x80) return {b0, 1, true};

    std::size_t need = 0;
    char32_t scalar = 0;
    if ((b0 & 0xE0) == 0xC0) {
        need = 1;
        scalar = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        need = 2;
        scalar = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        need = 3;
        scalar = b0 & 0x07;
    } else {
        return {b0, 1, false};  // stray continuation or invalid lead byte
    }
    if (pos + need >= text.size()) return {b0, 1, false};  // truncated sequence
    for (std::size_t i = 1; i <= need; ++i) {
        unsigned char bi = bytes[pos + i];
        if ((bi & 0xC0) != 0x80) return {b0, 1, false};
        scalar = (scalar << 6) | (bi & 0x3F);
    }
    // Reject overlong encodings and surrogate/out-of-range values.
    static constexpr char32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
    if (scalar < kMin[need]) return {b0, 1, false};
    if (scalar > 0x10FFFF || (scalar >= 0xD800 && scalar <= 0xDFFF)) return {b0, 1, false};
    return {scalar, need + 1, true};
}

std::uint64_t utf8_char_count(std::string_view text) {
    std::uint64_t n = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        pos += utf8_decode(text, pos).length;
        ++n;
    }
    return n;
}

bool is_unicode_space(char32_t s) {
    if (s == U' ' || (s >= U'\t' && s <= U'\r')) return true;
    if (s == 0x85 || s == 0xA0) return true;
    if (s == 0x1680) return true;
    if (s >= 0x2000 && s <= 0x200A) return true;
    return s == 0x2028 || s == 0x2029 || s == 0x202F || s == 0x205F || s == 0x3000;
}

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lower_latin1(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        Utf8Char c = utf8_decode(text, pos);
        char32_t s = c.scalar;
        if (c.valid && s <= 0xFF) {
            // A-Z, and the Latin-1 capitals except the multiplication sign.
            if ((s >= U'A' && s <= U'Z') || (s >= 0xC0 && s <= 0xDE && s != 0xD7)) s += 0x20;
            if (s < 0x80) {
                out.push_back(static_cast<char>(s));
            } else {
                out.push_back(static_cast<char>(0xC0 | (s >> 6)));
                out.push_back(static_cast<char>(0x80 | (s & 0x3F)));
            }
        } else {
            out.append(text.substr(pos, c.length));
        }
        pos += c.length;
    }
    return out;
}

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
    if (pos + prefix.size() > text.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (ascii_lower(text[pos + i]) != ascii_lower(prefix[i])) return false;
    }
    return true;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t hash64(std::string_view data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return splitmix64(h);
}

}  // namespace darkcorpus
