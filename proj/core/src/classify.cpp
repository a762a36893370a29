#include "darkcorpus/classify.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "darkcorpus/text_util.hpp"

namespace darkcorpus {

const std::vector<std::string>& activity_categories() {
    static const std::vector<std::string> kCategories = {
        "Arms/Weapons", "Cryptocurrency", "Drugs",       "Electronics", "Financial",
        "Gambling",     "Hacking",        "Pornography", "Violence",
    };
    return kCategories;
}

bool is_activity_category(std::string_view name) {
    const auto& cats = activity_categories();
    return std::binary_search(cats.begin(), cats.end(), name);
}

const Lexicon& default_lexicon() {
    static const Lexicon kLexicon = {
        {"Arms/Weapons",
         {"gun", "guns", "pistol", "rifle", "firearm", "firearms", "ammunition", "ammo",
          "explosive", "explosives", "grenade", "weapon", "weapons", "glock", "silencer"}},
        {"Cryptocurrency",
         {"bitcoin", "btc", "ethereum", "eth", "monero", "xmr", "litecoin", "wallet", "blockchain",
          "crypto", "cryptocurrency", "exchange", "mixer", "tumbler", "satoshi"}},
        {"Drugs",
         {"cocaine", "heroin", "mdma", "meth", "methamphetamine", "cannabis", "weed", "marijuana",
          "lsd", "xanax", "opioid", "opioids", "fentanyl", "pills", "gram", "grams", "stealth"}},
        {"Electronics",
         {"iphone", "laptop", "laptops", "smartphone", "electronics", "carded", "macbook",
          "samsung", "console", "gpu", "hardware", "gadget", "gadgets", "unlocked", "imei"}},
        {"Financial",
         {"carding", "cards", "cvv", "fullz", "paypal", "bank", "banking", "transfer",
          "transfers", "account", "accounts", "dumps", "skimmer", "counterfeit", "cashout",
          "money"}},
        {"Gambling",
         {"casino", "casinos", "poker", "blackjack", "roulette", "betting", "bets", "wager",
          "jackpot", "lottery", "slots", "bookmaker", "odds", "gambling", "dice"}},
        {"Hacking",
         {"exploit", "exploits", "malware", "ransomware", "botnet", "ddos", "hacking", "hacker",
          "hackers", "rootkit", "keylogger", "0day", "phishing", "rat", "breach"}},
        {"Pornography",
         {"porn", "pornography", "xxx", "videos", "cam", "webcam", "webcams",
          "nude", "nudes", "escort", "escorts", "fetish", "camgirl", "onlyfans", "explicit"}},
        {"Violence",
         {"hitman", "hitmen", "murder", "assault", "kidnapping", "torture", "beating", "killer",
          "killing", "revenge", "violence", "assassination", "thug", "enforcer", "harm"}},
    };
    return kLexicon;
}

Lexicon lexicon_from_json(const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    if (!doc.is_object()) throw std::invalid_argument("lexicon must be a JSON object");
    Lexicon lexicon;
    for (const auto& [category, words] : doc.items()) {
        if (!is_activity_category(category)) {
            throw std::invalid_argument("unknown category in lexicon: " + category);
        }
        if (!words.is_array()) {
            throw std::invalid_argument("lexicon entry for " + category + " must be an array");
        }
        auto& list = lexicon[category];
        for (const auto& word : words) {
            if (!word.is_string()) {
                throw std::invalid_argument("lexicon keywords must be strings");
            }
            std::string keyword = lower_latin1(word.get<std::string>());
            if (!keyword.empty()) list.push_back(std::move(keyword));
        }
    }
    return lexicon;
}

namespace {

bool is_boundary(const std::string& text, std::size_t pos) {
    // positions outside the text count as boundaries
    if (pos >= text.size()) return true;
    return !is_ascii_alnum(static_cast<unsigned char>(text[pos]));
}

std::size_t count_keyword_hits(const std::string& folded, const std::string& keyword) {
    std::size_t hits = 0;
    std::size_t pos = 0;
    while ((pos = folded.find(keyword, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || is_boundary(folded, pos - 1);
        bool right_ok = is_boundary(folded, pos + keyword.size());
        if (left_ok && right_ok) ++hits;
        ++pos;
    }
    return hits;
}

bool is_plain_token(const std::string& keyword) {
    if (keyword.empty()) return false;
    for (unsigned char c : keyword) {
        if (!is_ascii_alnum(c)) return false;
    }
    return true;
}

struct SvHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return static_cast<std::size_t>(hash64(s)); }
};

struct SvEq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const { return a == b; }
};

// A keyword hit is a substring with non-alphanumeric neighbours. For plain
// alphanumeric keywords that is exactly equality with a maximal
// alphanumeric run, so those go through one tokenizing pass and a hash
// lookup instead of one text scan per keyword.
struct KeywordIndex {
    std::vector<std::string> categories;  // lexicographic, inherited from the map
    std::unordered_map<std::string, std::vector<std::uint32_t>, SvHash, SvEq> tokens;
    std::vector<std::pair<std::uint32_t, std::string>> phrases;  // everything else

    explicit KeywordIndex(const Lexicon& lexicon) {
        for (const auto& [category, keywords] : lexicon) {
            auto cat = static_cast<std::uint32_t>(categories.size());
            categories.push_back(category);
            for (const auto& keyword : keywords) {
                if (is_plain_token(keyword)) {
                    tokens[keyword].push_back(cat);
                } else {
                    phrases.emplace_back(cat, keyword);
                }
            }
        }
    }

    // hit counts per category, same order as `categories`
    std::vector<std::size_t> count(const std::string& folded) const {
        std::vector<std::size_t> hits(categories.size(), 0);
        std::size_t pos = 0;
        while (pos < folded.size()) {
            if (!is_ascii_alnum(static_cast<unsigned char>(folded[pos]))) {
                ++pos;
                continue;
            }
            std::size_t start = pos;
            while (pos < folded.size() && is_ascii_alnum(static_cast<unsigned char>(folded[pos]))) {
                ++pos;
            }
            auto it = tokens.find(std::string_view(folded).substr(start, pos - start));
            if (it != tokens.end()) {
                for (std::uint32_t cat : it->second) ++hits[cat];
            }
        }
        for (const auto& [cat, phrase] : phrases) {
            hits[cat] += count_keyword_hits(folded, phrase);
        }
        return hits;
    }

    std::string winner(const std::string& folded, std::string_view fallback) const {
        std::vector<std::size_t> hits = count(folded);
        std::size_t best = 0;
        std::size_t best_hits = 0;
        for (std::size_t i = 0; i < hits.size(); ++i) {
            // strict: ties keep the lexicographically smaller category
            if (hits[i] > best_hits) {
                best_hits = hits[i];
                best = i;
            }
        }
        if (best_hits == 0) return std::string(fallback);
        return categories[best];
    }
};

}  // namespace

std::string keyword_classify(std::string_view text, const Lexicon& lexicon,
                             std::string_view fallback) {
    KeywordIndex index(lexicon);
    std::string folded = lower_latin1(text);
    return index.winner(folded, fallback);
}

namespace {

class LabelClassifier final : public Classifier {
public:
    explicit LabelClassifier(std::string fallback) : fallback_(std::move(fallback)) {}

    void classify(std::vector<PageRecord>& pages) override {
        for (auto& page : pages) {
            if (!is_activity_category(page.category)) page.category = fallback_;
        }
    }

    std::string name() const override { return "label"; }

private:
    std::string fallback_;
};

class KeywordClassifier final : public Classifier {
public:
    KeywordClassifier(Lexicon lexicon, std::string fallback)
        : index_(lexicon), fallback_(std::move(fallback)) {}

    void classify(std::vector<PageRecord>& pages) override {
        for (auto& page : pages) {
            page.category = index_.winner(lower_latin1(page.text), fallback_);
        }
    }

    std::string name() const override { return "keyword"; }

private:
    KeywordIndex index_;
    std::string fallback_;
};

// A child that exits without draining stdin would otherwise kill the whole
// process with SIGPIPE; ignore it for the classify call and report the
// failure through the exit status instead.
class ScopedIgnoreSigpipe {
public:
    ScopedIgnoreSigpipe() {
        struct sigaction ignore {};
        ignore.sa_handler = SIG_IGN;
        sigaction(SIGPIPE, &ignore, &old_);
    }
    ~ScopedIgnoreSigpipe() { sigaction(SIGPIPE, &old_, nullptr); }

private:
    struct sigaction old_ {};
};

class ExecClassifier final : public Classifier {
public:
    ExecClassifier(std::string command, std::string fallback)
        : command_(std::move(command)), fallback_(std::move(fallback)) {}

    void classify(std::vector<PageRecord>& pages) override {
        ScopedIgnoreSigpipe pipe_guard;
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw std::runtime_error("classifier pipe failed: " +
                                     std::string(std::strerror(errno)));
        }
        pid_t pid = fork();
        if (pid < 0) {
            throw std::runtime_error("classifier fork failed: " +
                                     std::string(std::strerror(errno)));
        }
        if (pid == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command_.c_str(), nullptr);
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);

        // feed requests from a second thread so a child that answers as it
        // reads cannot deadlock on full pipes
        std::thread writer([&pages, fd = to_child[1]]() {
            for (const auto& page : pages) {
                nlohmann::json req = {{"id", page.id}, {"text", page.text}};
                std::string line =
                    req.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
                line.push_back('\n');
                std::size_t off = 0;
                while (off < line.size()) {
                    ssize_t n = write(fd, line.data() + off, line.size() - off);
                    if (n <= 0) return;  // child went away; waitpid reports it
                    off += static_cast<std::size_t>(n);
                }
            }
            close(fd);
        });

        std::unordered_map<std::string, std::string> answers;
        std::string buffer;
        char chunk[4096];
        ssize_t n;
        while ((n = read(from_child[0], chunk, sizeof chunk)) > 0) {
            buffer.append(chunk, static_cast<std::size_t>(n));
            std::size_t start = 0;
            std::size_t eol;
            while ((eol = buffer.find('\n', start)) != std::string::npos) {
                parse_answer(buffer.substr(start, eol - start), answers);
                start = eol + 1;
            }
            buffer.erase(0, start);
        }
        writer.join();
        close(from_child[0]);
        if (!buffer.empty()) parse_answer(buffer, answers);

        int status = 0;
        waitpid(pid, &status, 0);
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            throw std::runtime_error("classifier command failed: " + command_);
        }

        for (auto& page : pages) {
            auto it = answers.find(page.id);
            if (it != answers.end() && is_activity_category(it->second)) {
                page.category = it->second;
            } else {
                page.category = fallback_;
            }
        }
    }

    std::string name() const override { return "exec"; }

private:
    static void parse_answer(const std::string& line,
                             std::unordered_map<std::string, std::string>& answers) {
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) return;
        if (!doc.contains("id") || !doc["id"].is_string()) return;
        if (!doc.contains("category") || !doc["category"].is_string()) return;
        answers[doc["id"].get<std::string>()] = doc["category"].get<std::string>();
    }

    std::string command_;
    std::string fallback_;
};

}  // namespace

std::unique_ptr<Classifier> make_label_classifier(std::string fallback) {
    return std::make_unique<LabelClassifier>(std::move(fallback));
}

std::unique_ptr<Classifier> make_keyword_classifier(Lexicon lexicon, std::string fallback) {
    return std::make_unique<KeywordClassifier>(std::move(lexicon), std::move(fallback));
}

std::unique_ptr<Classifier> make_exec_classifier(std::string command, std::string fallback) {
    return std::make_unique<ExecClassifier>(std::move(command), std::move(fallback));
}

CategoryDistribution category_distribution(const std::vector<PageRecord>& pages) {
    CategoryDistribution dist;
    for (const auto& page : pages) dist.add(page.category, page.text.size());
    return dist;
}

}  // namespace darkcorpus
