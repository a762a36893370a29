#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace darkcorpus {

// Identifier masking. Sensitive identifiers are replaced with fixed tokens,
// characters above U+00FF are removed, and whitespace runs are collapsed.
// Rules run in a fixed order; the lengthy-word rule always runs after the
// token-replacing rules so that anything they leave behind in a very long
// word is still caught.

enum class MaskRule {
    kEmail,
    kOnionUrl,
    kNormalUrl,
    kIpAddress,
    kBtcAddress,
    kEthAddress,
    kLtcAddress,
    kLongword,
    kUncommonChars,
    kWhitespace,
};

// Canonical application order.
inline constexpr MaskRule kAllMaskRules[] = {
    MaskRule::kEmail,      MaskRule::kOnionUrl,   MaskRule::kNormalUrl,
    MaskRule::kIpAddress,  MaskRule::kBtcAddress, MaskRule::kEthAddress,
    MaskRule::kLtcAddress, MaskRule::kLongword,   MaskRule::kUncommonChars,
    MaskRule::kWhitespace,
};

// Replacement token for a token-producing rule ("ID_EMAIL", ...). The
// uncommon-character and whitespace rules have no token and return "".
std::string_view mask_token(MaskRule rule);

// Stable lower_snake name used by the CLI --rules flag and in reports.
std::string_view mask_rule_name(MaskRule rule);

// A subset of rules, always kept in canonical order regardless of how the
// names were listed. Unknown names raise std::invalid_argument.
class MaskRuleSet {
  public:
    MaskRuleSet();  // all rules
    static MaskRuleSet from_names(const std::vector<std::string>& names);
    const std::vector<MaskRule>& rules() const { return rules_; }
    bool contains(MaskRule rule) const;

  private:
    std::vector<MaskRule> rules_;
};

// Counts of what one apply_masks call did.
struct MaskReport {
    std::map<std::string, std::uint64_t> replacements;  // rule name -> count
    std::uint64_t chars_removed{0};                     // by the uncommon-character rule
    std::uint64_t bytes_before{0};
    std::uint64_t bytes_after{0};

    std::uint64_t total_replacements() const {
        std::uint64_t t = 0;
        for (const auto& [_, n] : replacements) t += n;
        return t;
    }
};

// Single-rule passes. Each scans left to right, replacing every match with
// the rule's token, and reports how many replacements were made.
std::string mask_emails(std::string_view text, std::uint64_t* count = nullptr);
std::string mask_onion_urls(std::string_view text, std::uint64_t* count = nullptr);
std::string mask_normal_urls(std::string_view text, std::uint64_t* count = nullptr);
std::string mask_ip_addresses(std::string_view text, std::uint64_t* count = nullptr);
std::string mask_btc_addresses(std::string_view text, std::uint64_t* count = nullptr);
std::string mask_eth_addresses(std::string_view text, std::uint64_t* count = nullptr);
std::string mask_ltc_addresses(std::string_view text, std::uint64_t* count = nullptr);

// Replaces every whitespace-delimited run of kLongwordThreshold or more
// characters with ID_LONGWORD. Lengths are in characters, not bytes.
inline constexpr std::uint64_t kLongwordThreshold = 38;
std::string mask_longwords(std::string_view text, std::uint64_t* count = nullptr);

// Deletes every character above U+00FF (and every stray byte that is not
// valid UTF-8). The count is in characters removed.
std::string remove_uncommon_chars(std::string_view text, std::uint64_t* removed = nullptr);

// Collapses every run of Unicode whitespace to one ASCII space and trims
// leading and trailing whitespace.
std::string normalize_whitespace(std::string_view text);

// Runs the rule set in canonical order. Because removing uncommon characters
// can join fragments into a new identifier, the sequence repeats until the
// text stops changing; the report accumulates counts across repeats. The
// result is a fixed point: masking it again changes nothing and reports zero.
std::string apply_masks(std::string_view text, const MaskRuleSet& rules, MaskReport* report = nullptr);
std::string apply_masks(std::string_view text, MaskReport* report = nullptr);

}  // namespace darkcorpus
