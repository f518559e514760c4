#pragma once
// Deterministic text preprocessing: HTML stripping with code-span capture,
// sentence splitting, tokenization, stop-word removal. All behavior is driven
// by three versioned data files (stopwords.txt, tagger_lexicon.tsv,
// abbreviations.txt) whose content hashes feed the feature-schema fingerprint.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "codeneed/errors.hpp"
#include "codeneed/hash.hpp"
#include "codeneed/html.hpp"

namespace codeneed::textprep {

struct TextResources {
    std::vector<std::string> stopwords;             // file order
    std::unordered_set<std::string> stopword_set;
    std::map<std::string, std::string> lexicon;     // lowercase word -> PTB tag, first entry wins
    std::unordered_set<std::string> abbreviations;  // lowercase, trailing period included
    std::string stopwords_hash;
    std::string lexicon_hash;
    std::string abbreviations_hash;

    static TextResources load(const std::filesystem::path& dir);
};

struct PreparedText {
    std::vector<std::string> plain_sentences; // body text, code removed, whitespace-normalized
    std::vector<std::string> code_spans;      // inner text of every <code> element, in order
    std::string title_sentence;               // the title, always a single sentence
};

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string normalize_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true; // trims leading whitespace
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) out += ' ';
            in_space = true;
        } else {
            out += c;
            in_space = false;
        }
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open data file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

} // namespace detail

inline TextResources TextResources::load(const std::filesystem::path& dir) {
    TextResources res;

    std::string stop_raw = detail::read_file(dir / "stopwords.txt");
    res.stopwords_hash = hash_hex(stop_raw);
    {
        std::istringstream in(stop_raw);
        std::string line;
        while (std::getline(in, line)) {
            std::string word = normalize_whitespace(line);
            if (word.empty()) continue;
            word = lowercase(word);
            if (res.stopword_set.insert(word).second) res.stopwords.push_back(word);
        }
    }

    std::string lex_raw = detail::read_file(dir / "tagger_lexicon.tsv");
    res.lexicon_hash = hash_hex(lex_raw);
    {
        std::istringstream in(lex_raw);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::size_t tab = line.find('\t');
            if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
                throw ResourceError("tagger_lexicon.tsv line " + std::to_string(line_no) +
                                    ": expected word<TAB>tag");
            }
            std::string word = lowercase(normalize_whitespace(line.substr(0, tab)));
            std::string tag = normalize_whitespace(line.substr(tab + 1));
            res.lexicon.emplace(word, tag); // first occurrence wins
        }
    }

    std::string abbr_raw = detail::read_file(dir / "abbreviations.txt");
    res.abbreviations_hash = hash_hex(abbr_raw);
    {
        std::istringstream in(abbr_raw);
        std::string line;
        while (std::getline(in, line)) {
            std::string word = lowercase(normalize_whitespace(line));
            if (!word.empty()) res.abbreviations.insert(word);
        }
    }
    return res;
}

// Sentence boundaries at . ? ! followed by whitespace and an uppercase letter,
// or at end of text. A '.' preceded by a listed abbreviation does not split.
inline std::vector<std::string> split_sentences(std::string_view text, const TextResources& res) {
    std::vector<std::string> sentences;
    std::string current;
    const std::size_t n = text.size();
    std::size_t i = 0;

    auto flush = [&]() {
        std::string s = normalize_whitespace(current);
        if (!s.empty()) sentences.push_back(std::move(s));
        current.clear();
    };

    while (i < n) {
        char c = text[i];
        current += c;
        if (c == '.' || c == '?' || c == '!') {
            // Consume a run of terminators as one boundary candidate.
            while (i + 1 < n && (text[i + 1] == '.' || text[i + 1] == '?' || text[i + 1] == '!')) {
                ++i;
                current += text[i];
            }
            // Token preceding the boundary, for the abbreviation exception.
            std::string token;
            for (auto it = current.rbegin(); it != current.rend(); ++it) {
                if (std::isspace(static_cast<unsigned char>(*it))) break;
                token += *it;
            }
            std::reverse(token.begin(), token.end());
            bool is_abbrev = res.abbreviations.count(lowercase(token)) > 0;

            std::size_t next = i + 1;
            bool at_end = true;
            for (std::size_t k = next; k < n; ++k) {
                if (!std::isspace(static_cast<unsigned char>(text[k]))) {
                    at_end = false;
                    break;
                }
            }
            bool followed_by_upper = next < n &&
                                     std::isspace(static_cast<unsigned char>(text[next])) != 0;
            if (followed_by_upper) {
                std::size_t k = next;
                while (k < n && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
                followed_by_upper = k < n && std::isupper(static_cast<unsigned char>(text[k])) != 0;
            }
            if (!is_abbrev && (at_end || followed_by_upper)) flush();
        }
        ++i;
    }
    flush();
    return sentences;
}

// Whitespace split, then: leading/trailing punctuation stripped (hyphens and
// apostrophes survive between letters), and . , ? ! ; : come out as their own
// tokens so the tagger can see them.
inline std::vector<std::string> tokenize(std::string_view sentence) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = sentence.size();
    auto is_punct_token = [](char c) {
        return c == '.' || c == ',' || c == '?' || c == '!' || c == ';' || c == ':';
    };
    while (i < n) {
        char c = sentence[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (detail::is_word_char(c)) {
            std::string word;
            while (i < n) {
                char w = sentence[i];
                if (detail::is_word_char(w)) {
                    word += w;
                    ++i;
                } else if ((w == '-' || w == '\'') && i + 1 < n &&
                           detail::is_word_char(sentence[i + 1])) {
                    word += w;
                    ++i;
                } else {
                    break;
                }
            }
            tokens.push_back(std::move(word));
        } else if (is_punct_token(c)) {
            tokens.emplace_back(1, c);
            ++i;
        } else {
            ++i; // other punctuation is dropped
        }
    }
    return tokens;
}

/// Removes tokens present in the bundled stop-word list; order preserved.
/// Tokens are expected lowercased.
inline std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                                 const TextResources& res) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!res.stopword_set.count(t)) out.push_back(t);
    }
    return out;
}

/// HTML body -> sentences + code spans (title supplied separately).
inline PreparedText prepare(std::string_view title, std::string_view body_html,
                            const TextResources& res) {
    PreparedText out;
    html::StripResult stripped = html::strip(body_html);
    out.plain_sentences = split_sentences(stripped.plain, res);
    out.code_spans = std::move(stripped.code_spans);
    out.title_sentence = normalize_whitespace(title);
    return out;
}

} // namespace codeneed::textprep
