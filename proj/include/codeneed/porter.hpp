#pragma once
// Porter stemming algorithm (1980), five-step suffix stripper over the
// measure/condition machinery. Matches the canonical reference behavior,
// including its two long-standing rule adjustments in step 2
// ("bli" -> "ble" in place of "abli" -> "able", plus "logi" -> "log").
// Words of length <= 2 are returned unchanged.

#include <string>
#include <string_view>

namespace codeneed::porter {

namespace detail {

class Engine {
public:
    explicit Engine(std::string word) : b_(std::move(word)) {}

    std::string run() {
        if (b_.size() <= 2) return b_;
        step1ab();
        step1c();
        step2();
        step3();
        step4();
        step5();
        return b_;
    }

private:
    std::string b_;
    int j_ = 0; // end of candidate stem, set by ends()

    int k() const { return static_cast<int>(b_.size()) - 1; }

    // 'y' is a consonant at position 0 or after a vowel.
    bool cons(int i) const {
        switch (b_[static_cast<std::size_t>(i)]) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !cons(i - 1);
            default:
                return true;
        }
    }

    // Number of vowel-consonant sequences in b[0..j].
    int measure() const {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool double_consonant(int i) const {
        if (i < 1) return false;
        if (b_[static_cast<std::size_t>(i)] != b_[static_cast<std::size_t>(i - 1)]) return false;
        return cons(i);
    }

    // consonant-vowel-consonant ending at i, final consonant not w/x/y;
    // restores a trailing 'e' after shortening (hop-ing -> hope is wrong,
    // fil-ing -> file is right).
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char ch = b_[static_cast<std::size_t>(i)];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
        if (s.size() > b_.size()) return false;
        if (b_.compare(b_.size() - s.size(), s.size(), s) != 0) return false;
        j_ = k() - static_cast<int>(s.size());
        return true;
    }

    // Replaces everything after the stem (positions j+1..k) with s.
    void set_to(std::string_view s) {
        b_.resize(static_cast<std::size_t>(j_ + 1));
        b_.append(s);
    }

    void set_to_if_measure(std::string_view s) {
        if (measure() > 0) set_to(s);
    }

    void truncate(int new_k) { b_.resize(static_cast<std::size_t>(new_k + 1)); }

    // Plural and -ed/-ing removal.
    void step1ab() {
        if (b_.back() == 's') {
            if (ends("sses")) {
                truncate(k() - 2);
            } else if (ends("ies")) {
                set_to("i");
            } else if (b_[b_.size() - 2] != 's') {
                truncate(k() - 1);
            }
        }
        if (ends("eed")) {
            if (measure() > 0) truncate(k() - 1);
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            truncate(j_);
            j_ = k();
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_consonant(k())) {
                char ch = b_[b_.size() - 1];
                if (ch != 'l' && ch != 's' && ch != 'z') truncate(k() - 1);
            } else if (measure() == 1 && cvc(k())) {
                set_to("e");
            }
        }
    }

    // Terminal y -> i when the stem has a vowel.
    void step1c() {
        if (ends("y") && vowel_in_stem()) b_.back() = 'i';
    }

    void step2() {
        static constexpr std::pair<std::string_view, std::string_view> rules[] = {
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
            {"izer", "ize"},    {"bli", "ble"},     {"alli", "al"},   {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
            {"logi", "log"},
        };
        for (const auto& [suffix, replacement] : rules) {
            if (ends(suffix)) {
                set_to_if_measure(replacement);
                return; // first matching suffix consumes the step
            }
        }
    }

    void step3() {
        static constexpr std::pair<std::string_view, std::string_view> rules[] = {
            {"icate", "ic"}, {"ative", ""},  {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},    {"ness", ""},
        };
        for (const auto& [suffix, replacement] : rules) {
            if (ends(suffix)) {
                set_to_if_measure(replacement);
                return;
            }
        }
    }

    void step4() {
        static constexpr std::string_view suffixes[] = {
            "al",  "ance", "ence", "er",    "ic",   "able", "ible", "ant", "ement",
            "ment", "ent", "ion",  "ou",    "ism",  "ate",  "iti",  "ous", "ive", "ize",
        };
        for (std::string_view suffix : suffixes) {
            if (ends(suffix)) {
                if (suffix == "ion") {
                    // -ion only drops after s or t (decision -> decis).
                    if (j_ < 0) return;
                    char ch = b_[static_cast<std::size_t>(j_)];
                    if (ch != 's' && ch != 't') return;
                }
                if (measure() > 1) truncate(j_);
                return;
            }
        }
    }

    void step5() {
        j_ = k();
        if (b_.back() == 'e') {
            int a = measure();
            if (a > 1 || (a == 1 && !cvc(k() - 1))) truncate(k() - 1);
        }
        j_ = k(); // dropping a trailing vowel leaves the measure unchanged
        if (b_.back() == 'l' && double_consonant(k()) && measure() > 1) {
            truncate(k() - 1);
        }
    }
};

} // namespace detail

/// Stems one lowercase word. Inputs of length <= 2 come back unchanged.
inline std::string stem(std::string_view word) {
    return detail::Engine(std::string(word)).run();
}

} // namespace codeneed::porter
