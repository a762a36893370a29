#include "darkcorpus/html_text.hpp"

#include <map>

#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

namespace {

// The HTML named entities whose targets are in U+0000..U+00FF.
const std::map<std::string_view, unsigned>& named_entities() {
    static const std::map<std::string_view, unsigned> table = {
        {"amp", '&'},     {"lt", '<'},      {"gt", '>'},      {"quot", '"'},
        {"apos", '\''},   {"nbsp", 0xA0},   {"iexcl", 0xA1},  {"cent", 0xA2},
        {"pound", 0xA3},  {"curren", 0xA4}, {"yen", 0xA5},    {"brvbar", 0xA6},
        {"sect", 0xA7},   {"uml", 0xA8},    {"copy", 0xA9},   {"ordf", 0xAA},
        {"laquo", 0xAB},  {"not", 0xAC},    {"shy", 0xAD},    {"reg", 0xAE},
        {"macr", 0xAF},   {"deg", 0xB0},    {"plusmn", 0xB1}, {"sup2", 0xB2},
        {"sup3", 0xB3},   {"acute", 0xB4},  {"micro", 0xB5},  {"para", 0xB6},
        {"middot", 0xB7}, {"cedil", 0xB8},  {"sup1", 0xB9},   {"ordm", 0xBA},
        {"raquo", 0xBB},  {"frac14", 0xBC}, {"frac12", 0xBD}, {"frac34", 0xBE},
        {"iquest", 0xBF}, {"Agrave", 0xC0}, {"Aacute", 0xC1}, {"Acirc", 0xC2},
        {"Atilde", 0xC3}, {"Auml", 0xC4},   {"Aring", 0xC5},  {"AElig", 0xC6},
        {"Ccedil", 0xC7}, {"Egrave", 0xC8}, {"Eacute", 0xC9}, {"Ecirc", 0xCA},
        {"Euml", 0xCB},   {"Igrave", 0xCC}, {"Iacute", 0xCD}, {"Icirc", 0xCE},
        {"Iuml", 0xCF},   {"ETH", 0xD0},    {"Ntilde", 0xD1}, {"Ograve", 0xD2},
        {"Oacute", 0xD3}, {"Ocirc", 0xD4},  {"Otilde", 0xD5}, {"Ouml", 0xD6},
        {"times", 0xD7},  {"Oslash", 0xD8}, {"Ugrave", 0xD9}, {"Uacute", 0xDA},
        {"Ucirc", 0xDB},  {"Uuml", 0xDC},   {"Yacute", 0xDD}, {"THORN", 0xDE},
        {"szlig", 0xDF},  {"agrave", 0xE0}, {"aacute", 0xE1}, {"acirc", 0xE2},
        {"atilde", 0xE3}, {"auml", 0xE4},   {"aring", 0xE5},  {"aelig", 0xE6},
        {"ccedil", 0xE7}, {"egrave", 0xE8}, {"eacute", 0xE9}, {"ecirc", 0xEA},
        {"euml", 0xEB},   {"igrave", 0xEC}, {"iacute", 0xED}, {"icirc", 0xEE},
        {"iuml", 0xEF},   {"eth", 0xF0},    {"ntilde", 0xF1}, {"ograve", 0xF2},
        {"oacute", 0xF3}, {"ocirc", 0xF4},  {"otilde", 0xF5}, {"ouml", 0xF6},
        {"divide", 0xF7}, {"oslash", 0xF8}, {"ugrave", 0xF9}, {"uacute", 0xFA},
        {"ucirc", 0xFB},  {"uuml", 0xFC},   {"yacute", 0xFD}, {"thorn", 0xFE},
        {"yuml", 0xFF},
    };
    return table;
}

void append_scalar(std::string& out, unsigned scalar) {
    if (scalar < 0x80) {
        out.push_back(static_cast<char>(scalar));
    } else {
        out.push_back(static_cast<char>(0xC0 | (scalar >> 6)));
        out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
    }
}

bool ci_equals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
    }
    return true;
}

// Finds the next case-insensitive "</name" and returns the offset just past
// its closing '>', leaving `content_end` at the '<'. npos when unclosed.
std::size_t find_closing_tag(std::string_view html, std::size_t pos, std::string_view name,
                             std::size_t& content_end) {
    while (pos < html.size()) {
        std::size_t lt = html.find('<', pos);
        if (lt == std::string_view::npos) break;
        if (lt + 1 < html.size() && html[lt + 1] == '/' &&
            starts_with_ci(html, lt + 2, name)) {
            std::size_t after = lt + 2 + name.size();
            if (after >= html.size() || !is_ascii_alnum(html[after])) {
                std::size_t gt = html.find('>', after);
                content_end = lt;
                return gt == std::string_view::npos ? html.size() : gt + 1;
            }
        }
        pos = lt + 1;
    }
    content_end = html.size();
    return std::string_view::npos;
}

// Skips a tag starting at the '<'; quoted attribute values may contain '>'.
std::size_t skip_tag(std::string_view html, std::size_t pos) {
    std::size_t p = pos + 1;
    char quote = 0;
    while (p < html.size()) {
        char c = html[p];
        if (quote != 0) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '>') {
            return p + 1;
        }
        ++p;
    }
    return html.size();  // unterminated tag swallows the rest
}

void append_text_run(std::string_view html, std::size_t begin, std::size_t end, std::string& out) {
    std::size_t p = begin;
    while (p < end) {
        char c = html[p];
        if (c == '&') {
            std::size_t next = decode_entity(html, p, out);
            if (next != p) {
                p = next;
                continue;
            }
        }
        out.push_back(c);
        ++p;
    }
}

}  // namespace

std::size_t decode_entity(std::string_view html, std::size_t pos, std::string& out) {
    if (pos + 1 >= html.size() || html[pos] != '&') return pos;
    if (html[pos + 1] == '#') {
        std::size_t p = pos + 2;
        bool hex = p < html.size() && (html[p] == 'x' || html[p] == 'X');
        if (hex) ++p;
        unsigned long value = 0;
        std::size_t digits = 0;
        while (p < html.size() && (hex ? is_hex_digit(html[p]) : is_ascii_digit(html[p]))) {
            unsigned d = is_ascii_digit(html[p]) ? html[p] - '0' : (ascii_lower(html[p]) - 'a' + 10);
            value = value * (hex ? 16 : 10) + d;
            if (value > 0x110000) value = 0x110000;
            ++p;
            ++digits;
        }
        if (digits == 0 || p >= html.size() || html[p] != ';') return pos;
        if (value > 0xFF) return pos;  // out-of-range targets stay literal
        append_scalar(out, static_cast<unsigned>(value));
        return p + 1;
    }
    std::size_t p = pos + 1;
    while (p < html.size() && is_ascii_alnum(html[p]) && p - pos <= 10) ++p;
    if (p >= html.size() || html[p] != ';' || p == pos + 1) return pos;
    auto it = named_entities().find(html.substr(pos + 1, p - pos - 1));
    if (it == named_entities().end()) return pos;
    append_scalar(out, it->second);
    return p + 1;
}

ExtractedText extract_text(std::string_view html) {
    ExtractedText result;
    std::string all_text;   // visible text anywhere outside title/script/style
    std::string body_text;  // visible text between <body> and </body>
    bool saw_body = false;
    bool in_body = false;
    bool have_title = false;

    auto emit_space = [&] {
        all_text.push_back(' ');
        if (in_body) body_text.push_back(' ');
    };

    std::size_t pos = 0;
    while (pos < html.size()) {
        std::size_t lt = html.find('<', pos);
        std::size_t text_end = lt == std::string_view::npos ? html.size() : lt;
        if (text_end > pos) {
            append_text_run(html, pos, text_end, all_text);
            if (in_body) append_text_run(html, pos, text_end, body_text);
        }
        if (lt == std::string_view::npos) break;
        pos = lt;

        if (starts_with_ci(html, pos, "<!--")) {
            std::size_t end = html.find("-->", pos + 4);
            pos = end == std::string_view::npos ? html.size() : end + 3;
            emit_space();
            continue;
        }
        if (pos + 1 < html.size() && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
            pos = skip_tag(html, pos);
            emit_space();
            continue;
        }
        if (pos + 1 < html.size() && html[pos + 1] == '/') {
            std::size_t name_start = pos + 2;
            std::size_t name_end = name_start;
            while (name_end < html.size() && is_ascii_alnum(html[name_end])) ++name_end;
            std::string_view name = html.substr(name_start, name_end - name_start);
            if (ci_equals(name, "body")) in_body = false;
            pos = skip_tag(html, pos);
            emit_space();
            continue;
        }
        if (pos + 1 < html.size() && is_ascii_alpha(html[pos + 1])) {
            std::size_t name_start = pos + 1;
            std::size_t name_end = name_start;
            while (name_end < html.size() && is_ascii_alnum(html[name_end])) ++name_end;
            std::string_view name = html.substr(name_start, name_end - name_start);
            std::size_t after_tag = skip_tag(html, pos);

            if (ci_equals(name, "script") || ci_equals(name, "style")) {
                std::size_t content_end = 0;
                std::size_t after = find_closing_tag(html, after_tag, name, content_end);
                pos = after == std::string_view::npos ? html.size() : after;
                emit_space();
                continue;
            }
            if (ci_equals(name, "title") && !have_title) {
                std::size_t content_end = 0;
                std::size_t after = find_closing_tag(html, after_tag, name, content_end);
                append_text_run(html, after_tag, content_end, result.title);
                have_title = true;
                pos = after == std::string_view::npos ? html.size() : after;
                emit_space();
                continue;
            }
            if (ci_equals(name, "body")) {
                saw_body = true;
                in_body = true;
            }
            pos = after_tag;
            emit_space();
            continue;
        }
        // A bare '<' that does not open any markup is literal text.
        all_text.push_back('<');
        if (in_body) body_text.push_back('<');
        ++pos;
    }

    result.body = saw_body ? std::move(body_text) : std::move(all_text);
    return result;
}

}  // namespace darkcorpus
