#pragma once
// Baseline Penn-Treebank tagger: closed-class + frequent-word lexicon, then
// suffix rules, then capitalization, then NN. Deterministic by construction;
// pattern features need coarse consistency rather than state-of-the-art
// accuracy. Kept behind a small interface so a stronger tagger can be
// swapped in.

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "codeneed/textprep.hpp"

namespace codeneed::postag {

struct TaggedSentence {
    std::vector<std::string> tokens;
    std::vector<std::string> tags;
};

class Tagger {
public:
    virtual ~Tagger() = default;
    virtual TaggedSentence tag(const std::vector<std::string>& tokens) const = 0;
};

namespace detail {

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline bool looks_numeric(std::string_view s) {
    bool digit = false;
    std::size_t start = (s.size() > 1 && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
    for (std::size_t i = start; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digit = true;
        } else if (c != '.' && c != ',') {
            return false;
        }
    }
    return digit;
}

} // namespace detail

class RuleTagger : public Tagger {
public:
    explicit RuleTagger(const textprep::TextResources& res) : res_(&res) {}

    TaggedSentence tag(const std::vector<std::string>& tokens) const override {
        TaggedSentence out;
        out.tokens = tokens;
        out.tags.reserve(tokens.size());
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            out.tags.push_back(tag_one(tokens[i], i == 0));
        }
        return out;
    }

private:
    const textprep::TextResources* res_;

    std::string tag_one(const std::string& token, bool sentence_initial) const {
        if (token.empty()) return "NN";
        if (token.size() == 1) {
            switch (token[0]) {
                case '.': case '?': case '!': return ".";
                case ',': return ",";
                case ';': case ':': return ":";
                default: break;
            }
        }
        if (detail::looks_numeric(token)) return "CD";

        std::string lower = textprep::lowercase(token);
        auto it = res_->lexicon.find(lower);
        if (it != res_->lexicon.end()) return it->second;

        const std::size_t n = lower.size();
        if (detail::ends_with(lower, "'s")) return "NN";
        if (n >= 5 && detail::ends_with(lower, "ing")) return "VBG";
        if (n >= 4 && detail::ends_with(lower, "ed")) return "VBD";
        if (n >= 4 && detail::ends_with(lower, "ly")) return "RB";
        // Abstract-noun suffixes, plural first.
        static constexpr std::array<std::string_view, 9> noun_suffixes = {
            "ion", "ment", "ness", "ship", "ism", "ance", "ence", "ity", "hood"};
        for (std::string_view suf : noun_suffixes) {
            if (n > suf.size() + 1 && lower.back() == 's' &&
                detail::ends_with(std::string_view(lower).substr(0, n - 1), suf)) {
                return "NNS";
            }
            if (n > suf.size() && detail::ends_with(lower, suf)) return "NN";
        }
        static constexpr std::array<std::string_view, 10> adj_suffixes = {
            "able", "ible", "ful", "ous", "ive", "ish", "ical", "ic", "al", "less"};
        for (std::string_view suf : adj_suffixes) {
            if (n > suf.size() && detail::ends_with(lower, suf)) return "JJ";
        }
        if (n >= 5 && detail::ends_with(lower, "est")) return "JJS";
        if (n >= 4 && detail::ends_with(lower, "er")) return "NN";
        if (n >= 4 && lower.back() == 's' && !detail::ends_with(lower, "ss") &&
            !detail::ends_with(lower, "us") && !detail::ends_with(lower, "is")) {
            return "NNS";
        }
        if (!sentence_initial && std::isupper(static_cast<unsigned char>(token[0]))) {
            return "NNP";
        }
        return "NN";
    }
};

// Be-forms carry their own pattern symbol; Table-style pattern displays need
// "verb be" distinguished from other verbs, which a bare PTB tag cannot do.
inline bool is_be_form(std::string_view lower_token) {
    return lower_token == "am" || lower_token == "is" || lower_token == "are" ||
           lower_token == "was" || lower_token == "were" || lower_token == "be" ||
           lower_token == "been" || lower_token == "being";
}

/// Pattern alphabet: PTB tags, except be-form lexemes map to "BEV".
inline std::vector<std::string> pattern_symbols(const TaggedSentence& tagged) {
    std::vector<std::string> symbols;
    symbols.reserve(tagged.tags.size());
    for (std::size_t i = 0; i < tagged.tags.size(); ++i) {
        if (is_be_form(textprep::lowercase(tagged.tokens[i]))) {
            symbols.emplace_back("BEV");
        } else {
            symbols.push_back(tagged.tags[i]);
        }
    }
    return symbols;
}

/// Human-readable rendering of one pattern symbol.
inline std::string display_name(std::string_view symbol) {
    if (symbol == "BEV") return "verb be";
    if (symbol == "RB" || symbol == "RBR" || symbol == "RBS") return "adverb";
    if (symbol == "DT") return "determiner";
    if (symbol == "NN" || symbol == "NNS" || symbol == "NNP" || symbol == "NNPS") return "noun";
    if (symbol == "VBG") return "gerund";
    if (symbol == "WRB") return "wh-adverb";
    if (symbol == "TO") return "infinitive to";
    return std::string(symbol);
}

} // namespace codeneed::postag
