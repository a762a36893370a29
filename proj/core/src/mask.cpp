#include "darkcorpus/mask.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

namespace {

constexpr std::string_view kTokens[] = {
    "ID_EMAIL",       "ID_ONION_URL",  "ID_NORMAL_URL", "ID_IP_ADDRESS",
    "ID_BTC_ADDRESS", "ID_ETH_ADDRESS", "ID_LTC_ADDRESS", "ID_LONGWORD",
    "",               "",
};

constexpr std::string_view kRuleNames[] = {
    "email",       "onion_url",   "normal_url", "ip_address", "btc_address",
    "eth_address", "ltc_address", "longword",   "uncommon_chars", "whitespace",
};

bool is_local_char(char c) {
    return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
bool is_label_char(char c) { return is_ascii_alnum(c) || c == '-'; }
bool is_base32_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '2' && c <= '7'); }

bool is_base58_char(char c) {
    if (!is_ascii_alnum(c)) return false;
    return c != '0' && c != 'O' && c != 'I' && c != 'l';
}

bool is_bech32_char(char c) {
    if (c >= '0' && c <= '9') return c != '1';
    if (c >= 'a' && c <= 'z') return c != 'b' && c != 'i' && c != 'o';
    return false;
}

bool is_userinfo_char(char c) {
    return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' ||
           c == '-' || c == '~' || c == ':';
}

// Collects matches while copying the unmatched stretches through.
struct Rewriter {
    std::string_view in;
    std::string_view token;
    std::string out;
    std::size_t copied{0};
    std::uint64_t count{0};

    explicit Rewriter(std::string_view text, std::string_view tok) : in(text), token(tok) {
        out.reserve(text.size());
    }
    void replace(std::size_t begin, std::size_t end) {
        out.append(in.substr(copied, begin - copied));
        out.append(token);
        copied = end;
        ++count;
    }
    std::string finish() {
        out.append(in.substr(copied));
        return std::move(out);
    }
};

// One dot-separated label sequence, e.g. the domain of an email or the host
// of a URL. Spans are [begin, end) byte offsets into the scanned text.
struct LabelSpan {
    std::size_t begin;
    std::size_t end;
};

// Parses labels of [A-Za-z0-9-] separated by single dots starting at pos.
// Stops before a dot that is not followed by a label character. Returns the
// position just past the last label.
std::size_t parse_labels(std::string_view text, std::size_t pos, std::vector<LabelSpan>& labels) {
    labels.clear();
    std::size_t p = pos;
    while (p < text.size() && is_label_char(text[p])) {
        std::size_t start = p;
        while (p < text.size() && is_label_char(text[p])) ++p;
        labels.push_back({start, p});
        if (p < text.size() && text[p] == '.' && p + 1 < text.size() && is_label_char(text[p + 1])) {
            ++p;
        } else {
            break;
        }
    }
    return labels.empty() ? pos : labels.back().end;
}

bool label_is_tld(std::string_view text, const LabelSpan& l) {
    if (l.end - l.begin < 2) return false;
    for (std::size_t i = l.begin; i < l.end; ++i) {
        if (!is_ascii_alpha(text[i])) return false;
    }
    return true;
}

// Finds the rightmost label (index >= min_index) usable as a TLD such that
// the character following it is not part of a larger word. Returns the label
// index or -1.
int find_tld(std::string_view text, const std::vector<LabelSpan>& labels, std::size_t min_index) {
    for (std::size_t j = labels.size(); j-- > min_index;) {
        if (!label_is_tld(text, labels[j])) continue;
        std::size_t after = labels[j].end;
        if (after < text.size() && (is_ascii_alnum(text[after]) || text[after] == '_')) continue;
        return static_cast<int>(j);
    }
    return -1;
}

// Optional ":port" then path/query/fragment. Trailing sentence punctuation
// is left out of the match.
std::size_t parse_url_tail(std::string_view text, std::size_t pos) {
    std::size_t p = pos;
    if (p < text.size() && text[p] == ':') {
        std::size_t d = p + 1;
        while (d < text.size() && is_ascii_digit(text[d])) ++d;
        if (d > p + 1) p = d;
    }
    if (p < text.size() && (text[p] == '/' || text[p] == '?' || text[p] == '#')) {
        auto is_url_char = [](char c) {
            if (is_ascii_alnum(c)) return true;
            return std::string_view("-._~:/?#[]@!$&'()*+,;=%").find(c) != std::string_view::npos;
        };
        while (p < text.size() && is_url_char(text[p])) ++p;
        auto is_trim_char = [](char c) {
            return std::string_view(".,;:!?'\")]").find(c) != std::string_view::npos;
        };
        while (p > pos && is_trim_char(text[p - 1])) --p;
    }
    return p;
}

// If the text just before host_start is "user[:pass]@" with an optional
// scheme before it, extends the match leftwards. Returns the new start.
std::size_t extend_scheme_and_userinfo(std::string_view text, std::size_t host_start) {
    std::size_t start = host_start;
    if (start > 0 && text[start - 1] == '@') {
        std::size_t u = start - 1;
        while (u > 0 && is_userinfo_char(text[u - 1])) --u;
        if (u < start - 1) start = u;
    }
    if (start >= 3 && text[start - 1] == '/' && text[start - 2] == '/' && text[start - 3] == ':') {
        std::size_t s = start - 3;
        while (s > 0 && (is_ascii_alnum(text[s - 1]) || text[s - 1] == '+' ||
                         text[s - 1] == '.' || text[s - 1] == '-')) {
            --s;
        }
        if (s < start - 3 && is_ascii_alpha(text[s])) start = s;
    }
    return start;
}

bool host_ends_in_onion(std::string_view text, const std::vector<LabelSpan>& labels) {
    if (labels.empty()) return false;
    const LabelSpan& last = labels.back();
    return starts_with_ci(text, last.begin, "onion") && last.end - last.begin == 5;
}

// --- IP parsing -----------------------------------------------------------

// Dotted quad at pos; each octet 1-3 digits, <= 255, never part of a longer
// digit run. Returns the end offset or 0 on failure.
std::size_t parse_ipv4(std::string_view text, std::size_t pos) {
    std::size_t p = pos;
    for (int octet = 0; octet < 4; ++octet) {
        std::size_t d = p;
        while (d < text.size() && is_ascii_digit(text[d])) ++d;
        std::size_t len = d - p;
        if (len < 1 || len > 3) return 0;
        int value = 0;
        for (std::size_t i = p; i < d; ++i) value = value * 10 + (text[i] - '0');
        if (value > 255) return 0;
        p = d;
        if (octet < 3) {
            if (p >= text.size() || text[p] != '.') return 0;
            ++p;
        }
    }
    return p;
}

// IPv6 in full or :: compressed form, optionally ending in a dotted quad,
// optionally followed by a %zone. Requires at least one explicit group so
// bare "::" in running text is not treated as an address.
std::size_t parse_ipv6(std::string_view text, std::size_t pos) {
    std::size_t p = pos;
    int groups = 0;
    bool compressed = false;

    if (p + 1 < text.size() && text[p] == ':' && text[p + 1] == ':') {
        compressed = true;
        p += 2;
    } else if (p >= text.size() || !is_hex_digit(text[p])) {
        return 0;
    }

    while (p < text.size() && is_hex_digit(text[p])) {
        std::size_t d = p;
        while (d < text.size() && is_hex_digit(text[d])) ++d;
        std::size_t len = d - p;

        // A run of decimal digits followed by '.' can only be an embedded
        // IPv4 tail, which stands in for the last two groups.
        if (d < text.size() && text[d] == '.') {
            std::size_t v4_end = parse_ipv4(text, p);
            if (v4_end != 0 && (v4_end >= text.size() || !is_ascii_digit(text[v4_end]))) {
                groups += 2;
                p = v4_end;
                break;
            }
            return 0;
        }
        if (len > 4) return 0;
        ++groups;
        if (groups > 8) return 0;
        p = d;
        if (p < text.size() && text[p] == ':') {
            if (p + 1 < text.size() && text[p + 1] == ':') {
                if (compressed) return 0;
                compressed = true;
                p += 2;
            } else if (p + 1 < text.size() && is_hex_digit(text[p + 1])) {
                ++p;
            } else {
                break;
            }
        } else {
            break;
        }
    }

    if (groups < 1) return 0;
    if (compressed ? groups > 7 : groups != 8) return 0;

    if (p < text.size() && text[p] == '%') {
        std::size_t z = p + 1;
        while (z < text.size() &&
               (is_ascii_alnum(text[z]) || text[z] == '_' || text[z] == '.' || text[z] == '-')) {
            ++z;
        }
        if (z > p + 1) p = z;
    }
    return p;
}

}  // namespace

std::string_view mask_token(MaskRule rule) { return kTokens[static_cast<int>(rule)]; }
std::string_view mask_rule_name(MaskRule rule) { return kRuleNames[static_cast<int>(rule)]; }

MaskRuleSet::MaskRuleSet() : rules_(std::begin(kAllMaskRules), std::end(kAllMaskRules)) {}

MaskRuleSet MaskRuleSet::from_names(const std::vector<std::string>& names) {
    MaskRuleSet set;
    set.rules_.clear();
    std::array<bool, 10> wanted{};
    for (const auto& name : names) {
        bool known = false;
        for (MaskRule rule : kAllMaskRules) {
            if (name == mask_rule_name(rule)) {
                wanted[static_cast<int>(rule)] = true;
                known = true;
                break;
            }
        }
        if (!known) throw std::invalid_argument("unknown mask rule: " + name);
    }
    for (MaskRule rule : kAllMaskRules) {
        if (wanted[static_cast<int>(rule)]) set.rules_.push_back(rule);
    }
    return set;
}

bool MaskRuleSet::contains(MaskRule rule) const {
    return std::find(rules_.begin(), rules_.end(), rule) != rules_.end();
}

std::string mask_emails(std::string_view text, std::uint64_t* count) {
    Rewriter rw(text, mask_token(MaskRule::kEmail));
    std::vector<LabelSpan> labels;
    std::size_t pos = 0;
    while ((pos = text.find('@', pos)) != std::string_view::npos) {
        if (pos < rw.copied) {
            ++pos;
            continue;
        }
        std::size_t local = pos;
        while (local > rw.copied && is_local_char(text[local - 1])) --local;
        if (local == pos) {
            ++pos;
            continue;
        }
        parse_labels(text, pos + 1, labels);
        int tld = labels.size() >= 2 ? find_tld(text, labels, 1) : -1;
        if (tld < 0) {
            ++pos;
            continue;
        }
        rw.replace(local, labels[tld].end);
        pos = labels[tld].end;
    }
    if (count) *count = rw.count;
    return rw.finish();
}

std::string mask_onion_urls(std::string_view text, std::uint64_t* count) {
    Rewriter rw(text, mask_token(MaskRule::kOnionUrl));
    std::size_t pos = 0;
    while ((pos = text.find(".onion", pos)) != std::string_view::npos) {
        if (pos < rw.copied) {
            ++pos;
            continue;
        }
        // The base32 label just before ".onion" must be exactly 16 or 56
        // characters and not a tail of a longer base32 run.
        std::size_t label = pos;
        while (label > rw.copied && is_base32_char(text[label - 1])) --label;
        std::size_t len = pos - label;
        std::size_t after_tld = pos + 6;
        bool tld_clear = after_tld >= text.size() ||
                         (!is_ascii_alnum(text[after_tld]) && text[after_tld] != '-');
        if ((len != 16 && len != 56) || !tld_clear) {
            ++pos;
            continue;
        }
        std::size_t start = extend_scheme_and_userinfo(text, label);
        if (start < rw.copied) start = label;
        std::size_t end = parse_url_tail(text, after_tld);
        rw.replace(start, end);
        pos = end;
    }
    if (count) *count = rw.count;
    return rw.finish();
}

std::string mask_normal_urls(std::string_view text, std::uint64_t* count) {
    Rewriter rw(text, mask_token(MaskRule::kNormalUrl));
    std::vector<LabelSpan> labels;
    std::size_t pos = 0;
    while (pos < text.size()) {
        // Next anchor: an http(s) scheme or a bare www. host.
        std::size_t anchor = std::string_view::npos;
        bool scheme_form = false;
        for (std::size_t probe = pos; probe < text.size();) {
            char c = ascii_lower(text[probe]);
            if (c == 'h' && (starts_with_ci(text, probe, "http://") ||
                             starts_with_ci(text, probe, "https://"))) {
                anchor = probe;
                scheme_form = true;
                break;
            }
            if (c == 'w' && starts_with_ci(text, probe, "www.")) {
                anchor = probe;
                scheme_form = false;
                break;
            }
            std::size_t h = text.find_first_of("hHwW", probe + 1);
            if (h == std::string_view::npos) break;
            probe = h;
        }
        if (anchor == std::string_view::npos) break;

        std::size_t host_start = anchor;
        if (scheme_form) {
            host_start = anchor + (starts_with_ci(text, anchor, "https://") ? 8 : 7);
            // Skip userinfo if present.
            std::size_t u = host_start;
            while (u < text.size() && is_userinfo_char(text[u])) ++u;
            if (u < text.size() && text[u] == '@') host_start = u + 1;
        }

        std::size_t host_end = parse_labels(text, host_start, labels);
        bool ok = labels.size() >= 2 && !host_ends_in_onion(text, labels);
        if (ok && !scheme_form) {
            // Bare www. hosts need a real domain after the prefix: at least
            // two more labels ending in an alphabetic TLD.
            int tld = labels.size() >= 3 ? find_tld(text, labels, 2) : -1;
            ok = tld >= 0;
            if (ok) host_end = labels[tld].end;
        }
        if (!ok) {
            pos = anchor + 1;
            continue;
        }
        std::size_t end = parse_url_tail(text, host_end);
        rw.replace(anchor, end);
        pos = end;
    }
    if (count) *count = rw.count;
    return rw.finish();
}

std::string mask_ip_addresses(std::string_view text, std::uint64_t* count) {
    Rewriter rw(text, mask_token(MaskRule::kIpAddress));
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        bool could_start = is_hex_digit(c) || (c == ':' && i + 1 < text.size() && text[i + 1] == ':');
        if (!could_start) {
            ++i;
            continue;
        }
        if (i > rw.copied) {
            char prev = text[i - 1];
            if (is_ascii_alnum(prev) || prev == '_' || prev == ':' || prev == '.') {
                ++i;
                continue;
            }
        } else if (i < rw.copied) {
            ++i;
            continue;
        }
        std::size_t end = parse_ipv6(text, i);
        if (end != 0) {
            bool clear = end >= text.size() || (!is_ascii_alnum(text[end]) && text[end] != '_');
            if (clear) {
                rw.replace(i, end);
                i = end;
                continue;
            }
        }
        if (is_ascii_digit(c)) {
            end = parse_ipv4(text, i);
            if (end != 0 && (end >= text.size() || !is_ascii_digit(text[end]))) {
                rw.replace(i, end);
                i = end;
                continue;
            }
        }
        ++i;
    }
    if (count) *count = rw.count;
    return rw.finish();
}

namespace {

// Shared shape of the four coin-address forms: either a Base58 run with a
// required first character and length range, or a bech32 prefix + data run.
std::string mask_coins(std::string_view text, std::string_view token, std::string_view b58_starts,
                       std::size_t b58_min, std::size_t b58_max, std::string_view bech_prefix,
                       std::uint64_t* count) {
    Rewriter rw(text, token);
    for (std::size_t i = 0; i < text.size();) {
        if (i < rw.copied || !is_ascii_alnum(text[i]) ||
            (i > 0 && i > rw.copied && is_ascii_alnum(text[i - 1]))) {
            ++i;
            continue;
        }
        // bech32 form, e.g. bc1... / ltc1...
        if (text.compare(i, bech_prefix.size(), bech_prefix) == 0) {
            std::size_t d = i + bech_prefix.size();
            while (d < text.size() && is_bech32_char(text[d])) ++d;
            std::size_t data_len = d - i - bech_prefix.size();
            bool clear = d >= text.size() || !is_ascii_alnum(text[d]);
            if (data_len >= 11 && data_len <= 71 && clear) {
                rw.replace(i, d);
                i = d;
                continue;
            }
        }
        // Base58 form with a fixed first character.
        if (b58_starts.find(text[i]) != std::string_view::npos) {
            std::size_t d = i;
            while (d < text.size() && is_base58_char(text[d])) ++d;
            std::size_t len = d - i;
            bool clear = d >= text.size() || !is_ascii_alnum(text[d]);
            if (len >= b58_min && len <= b58_max && clear) {
                rw.replace(i, d);
                i = d;
                continue;
            }
        }
        // Skip the rest of this alphanumeric word.
        while (i < text.size() && is_ascii_alnum(text[i])) ++i;
    }
    if (count) *count = rw.count;
    return rw.finish();
}

}  // namespace

std::string mask_btc_addresses(std::string_view text, std::uint64_t* count) {
    return mask_coins(text, mask_token(MaskRule::kBtcAddress), "13", 26, 35, "bc1", count);
}

std::string mask_ltc_addresses(std::string_view text, std::uint64_t* count) {
    return mask_coins(text, mask_token(MaskRule::kLtcAddress), "LM", 26, 34, "ltc1", count);
}

std::string mask_eth_addresses(std::string_view text, std::uint64_t* count) {
    Rewriter rw(text, mask_token(MaskRule::kEthAddress));
    std::size_t pos = 0;
    while ((pos = text.find('0', pos)) != std::string_view::npos) {
        if (pos < rw.copied || pos + 1 >= text.size() ||
            (text[pos + 1] != 'x' && text[pos + 1] != 'X') ||
            (pos > rw.copied && is_ascii_alnum(text[pos - 1]))) {
            ++pos;
            continue;
        }
        std::size_t d = pos + 2;
        while (d < text.size() && is_hex_digit(text[d])) ++d;
        bool clear = d >= text.size() || !is_ascii_alnum(text[d]);
        if (d - pos - 2 == 40 && clear) {
            rw.replace(pos, d);
            pos = d;
        } else {
            ++pos;
        }
    }
    if (count) *count = rw.count;
    return rw.finish();
}

std::string mask_longwords(std::string_view text, std::uint64_t* count) {
    Rewriter rw(text, mask_token(MaskRule::kLongword));
    std::size_t pos = 0;
    while (pos < text.size()) {
        Utf8Char c = utf8_decode(text, pos);
        if (c.valid && is_unicode_space(c.scalar)) {
            pos += c.length;
            continue;
        }
        std::size_t run_start = pos;
        std::uint64_t run_chars = 0;
        while (pos < text.size()) {
            Utf8Char rc = utf8_decode(text, pos);
            if (rc.valid && is_unicode_space(rc.scalar)) break;
            pos += rc.length;
            ++run_chars;
        }
        if (run_chars >= kLongwordThreshold) rw.replace(run_start, pos);
    }
    if (count) *count = rw.count;
    return rw.finish();
}

std::string remove_uncommon_chars(std::string_view text, std::uint64_t* removed) {
    std::string out;
    out.reserve(text.size());
    std::uint64_t dropped = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        Utf8Char c = utf8_decode(text, pos);
        if (c.valid && c.scalar <= 0xFF) {
            out.append(text.substr(pos, c.length));
        } else {
            ++dropped;
        }
        pos += c.length;
    }
    if (removed) *removed = dropped;
    return out;
}

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        Utf8Char c = utf8_decode(text, pos);
        if (c.valid && is_unicode_space(c.scalar)) {
            pending_space = true;
        } else {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.append(text.substr(pos, c.length));
        }
        pos += c.length;
    }
    return out;
}

std::string apply_masks(std::string_view text, const MaskRuleSet& rules, MaskReport* report) {
    MaskReport local;
    local.bytes_before = text.size();

    std::string current(text);
    // Removing uncommon characters can splice the pieces around them into a
    // fresh identifier, so repeat the sequence until nothing changes. Every
    // round consumes match anchors, so this converges in a few rounds.
    for (int round = 0; round < 16; ++round) {
        std::string next = current;
        for (MaskRule rule : rules.rules()) {
            std::uint64_t n = 0;
            switch (rule) {
                case MaskRule::kEmail: next = mask_emails(next, &n); break;
                case MaskRule::kOnionUrl: next = mask_onion_urls(next, &n); break;
                case MaskRule::kNormalUrl: next = mask_normal_urls(next, &n); break;
                case MaskRule::kIpAddress: next = mask_ip_addresses(next, &n); break;
                case MaskRule::kBtcAddress: next = mask_btc_addresses(next, &n); break;
                case MaskRule::kEthAddress: next = mask_eth_addresses(next, &n); break;
                case MaskRule::kLtcAddress: next = mask_ltc_addresses(next, &n); break;
                case MaskRule::kLongword: next = mask_longwords(next, &n); break;
                case MaskRule::kUncommonChars:
                    next = remove_uncommon_chars(next, &n);
                    local.chars_removed += n;
                    n = 0;
                    break;
                case MaskRule::kWhitespace: next = normalize_whitespace(next); break;
            }
            if (n) local.replacements[std::string(mask_rule_name(rule))] += n;
        }
        bool stable = next == current;
        current = std::move(next);
        if (stable) break;
    }

    local.bytes_after = current.size();
    if (report) *report = std::move(local);
    return current;
}

std::string apply_masks(std::string_view text, MaskReport* report) {
    return apply_masks(text, MaskRuleSet(), report);
}

}  // namespace darkcorpus
