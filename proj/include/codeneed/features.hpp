#pragma once
// Feature-schema learning and featurization. Four feature families: selected
// keyword stems, POS tag patterns (length 3-6) from title and body, complex
// sentences joined by one of six conjunctions, and <code> element counts.
// Selection uses per-class occurrence counts with the frequency difference d
// and frequency ratio r (percent).

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "codeneed/corpus.hpp"
#include "codeneed/errors.hpp"
#include "codeneed/hash.hpp"
#include "codeneed/porter.hpp"
#include "codeneed/postag.hpp"
#include "codeneed/textprep.hpp"

namespace codeneed::features {

using json = nlohmann::json;

struct Thresholds {
    std::uint64_t d_min_keywords = 50;
    std::uint64_t d_min_body = 50;
    std::uint64_t d_min_title = 20;
    double r_max = 50.0; // percent
};

struct TermStat {
    std::string term;
    std::uint64_t f_c = 0;  // occurrences in needs-code training questions
    std::uint64_t f_nc = 0; // occurrences in no-code training questions
    std::uint64_t d = 0;
    double r = 100.0; // percent
};

/// d = |f_c - f_nc|; r = 100 * min/max, with r = 100 when both counts are 0.
inline std::pair<std::uint64_t, double> diff_ratio(std::uint64_t f_c, std::uint64_t f_nc) {
    std::uint64_t lo = std::min(f_c, f_nc);
    std::uint64_t hi = std::max(f_c, f_nc);
    std::uint64_t d = hi - lo;
    double r = (hi == 0) ? 100.0 : 100.0 * static_cast<double>(lo) / static_cast<double>(hi);
    return {d, r};
}

inline const std::array<std::string_view, 6>& complex_conjunctions() {
    static const std::array<std::string_view, 6> words = {"because", "but",   "except",
                                                          "however", "when", "while"};
    return words;
}

struct FeatureSchema {
    Thresholds thresholds;
    std::vector<std::string> keywords;       // sorted, unique
    std::vector<std::string> title_patterns; // symbols joined by '+', sorted
    std::vector<std::string> body_patterns;
    std::vector<std::string> conjunctions; // fixed six, sorted
    std::string stopwords_hash;
    std::string lexicon_hash;
    std::string abbreviations_hash;
    std::string fingerprint;

    std::size_t vector_length() const {
        return keywords.size() + title_patterns.size() + body_patterns.size() + 2;
    }
};

struct FeatureVector {
    std::vector<std::int64_t> keyword_counts;
    std::vector<std::int64_t> title_pattern_counts;
    std::vector<std::int64_t> body_pattern_counts;
    std::int64_t complex_sentence_count = 0;
    std::int64_t code_element_count = 0;

    std::vector<double> to_row() const {
        std::vector<double> row;
        row.reserve(keyword_counts.size() + title_pattern_counts.size() +
                    body_pattern_counts.size() + 2);
        for (auto v : keyword_counts) row.push_back(static_cast<double>(v));
        for (auto v : title_pattern_counts) row.push_back(static_cast<double>(v));
        for (auto v : body_pattern_counts) row.push_back(static_cast<double>(v));
        row.push_back(static_cast<double>(complex_sentence_count));
        row.push_back(static_cast<double>(code_element_count));
        return row;
    }
};

namespace detail {

inline bool all_lower_alpha(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < 'a' || c > 'z') return false;
    return true;
}

// Keyword pipeline: lowercase, drop stop words, keep tokens with letters,
// stem pure-alphabetic tokens.
inline std::vector<std::string> keyword_stems_of(const std::vector<std::string>& tokens,
                                                 const textprep::TextResources& res) {
    std::vector<std::string> lowered;
    lowered.reserve(tokens.size());
    for (const auto& t : tokens) lowered.push_back(textprep::lowercase(t));
    std::vector<std::string> kept = textprep::remove_stopwords(lowered, res);
    std::vector<std::string> stems;
    stems.reserve(kept.size());
    for (auto& t : kept) {
        bool has_alpha = std::any_of(t.begin(), t.end(),
                                     [](char c) { return c >= 'a' && c <= 'z'; });
        if (!has_alpha) continue;
        stems.push_back(all_lower_alpha(t) ? porter::stem(t) : t);
    }
    return stems;
}

inline std::string join_pattern(const std::vector<std::string>& symbols, std::size_t start,
                                std::size_t len) {
    std::string out;
    for (std::size_t i = 0; i < len; ++i) {
        if (i) out += '+';
        out += symbols[start + i];
    }
    return out;
}

template <typename Fn>
inline void for_each_ngram(const std::vector<std::string>& symbols, Fn&& fn) {
    for (std::size_t n = 3; n <= 6; ++n) {
        if (symbols.size() < n) break;
        for (std::size_t i = 0; i + n <= symbols.size(); ++i) fn(join_pattern(symbols, i, n));
    }
}

} // namespace detail

// Per-question derived text, computed once and reused by learning and
// featurization.
struct AnalyzedQuestion {
    textprep::PreparedText prep;
    std::vector<std::string> stems;                      // keyword pipeline, title + body
    std::vector<std::string> title_symbols;              // one sequence for the title
    std::vector<std::vector<std::string>> body_symbols;  // one per body sentence
};

inline AnalyzedQuestion analyze(const corpus::QuestionRecord& q,
                                const textprep::TextResources& res,
                                const postag::Tagger& tagger) {
    AnalyzedQuestion out;
    out.prep = textprep::prepare(q.title, q.body_html, res);

    std::vector<std::string> tokens = textprep::tokenize(out.prep.title_sentence);
    out.title_symbols = postag::pattern_symbols(tagger.tag(tokens));
    out.stems = detail::keyword_stems_of(tokens, res);

    for (const auto& sentence : out.prep.plain_sentences) {
        std::vector<std::string> body_tokens = textprep::tokenize(sentence);
        auto stems = detail::keyword_stems_of(body_tokens, res);
        out.stems.insert(out.stems.end(), stems.begin(), stems.end());
        out.body_symbols.push_back(postag::pattern_symbols(tagger.tag(body_tokens)));
    }
    return out;
}

namespace detail {

using ClassCounts = std::map<std::string, std::array<std::uint64_t, 2>>; // [needs, nocode]

inline std::vector<TermStat> select(const ClassCounts& counts, std::uint64_t d_min, double r_max) {
    std::vector<TermStat> out;
    for (const auto& [term, c] : counts) {
        auto [d, r] = diff_ratio(c[0], c[1]);
        if (d >= d_min && r <= r_max) out.push_back({term, c[0], c[1], d, r});
    }
    return out; // map iteration keeps terms sorted
}

struct TrainCounts {
    ClassCounts stems;
    ClassCounts title_patterns;
    ClassCounts body_patterns;
};

template <typename Corpus>
inline TrainCounts count_train(const Corpus& train, const textprep::TextResources& res,
                               const postag::Tagger& tagger) {
    TrainCounts counts;
    bool seen[2] = {false, false};
    for (const auto& lq : train) {
        std::size_t cls = lq.label.needs_code ? 0 : 1;
        seen[cls] = true;
        AnalyzedQuestion a = analyze(lq.question, res, tagger);
        for (const auto& s : a.stems) counts.stems[s][cls]++;
        for_each_ngram(a.title_symbols,
                       [&](const std::string& p) { counts.title_patterns[p][cls]++; });
        for (const auto& sent : a.body_symbols)
            for_each_ngram(sent, [&](const std::string& p) { counts.body_patterns[p][cls]++; });
    }
    if (!seen[0] || !seen[1])
        throw CorpusError("schema learning needs both classes in the training corpus");
    return counts;
}

} // namespace detail

enum class PatternSource { title, body };

/// Keyword stems whose class counts pass d >= d_min_keywords and r <= r_max.
template <typename Corpus>
inline std::vector<TermStat> select_keywords(const Corpus& train,
                                             const textprep::TextResources& res,
                                             const postag::Tagger& tagger,
                                             const Thresholds& th = {}) {
    auto counts = detail::count_train(train, res, tagger);
    return detail::select(counts.stems, th.d_min_keywords, th.r_max);
}

/// POS tag n-grams (n in 3..6) passing the source-specific thresholds.
template <typename Corpus>
inline std::vector<TermStat> mine_pos_patterns(const Corpus& train, PatternSource source,
                                               const textprep::TextResources& res,
                                               const postag::Tagger& tagger,
                                               const Thresholds& th = {}) {
    auto counts = detail::count_train(train, res, tagger);
    if (source == PatternSource::title)
        return detail::select(counts.title_patterns, th.d_min_title, th.r_max);
    return detail::select(counts.body_patterns, th.d_min_body, th.r_max);
}

/// Sentences containing at least one of the six conjunctions as a whole word
/// (case-insensitive); a sentence counts once however many it contains.
inline std::int64_t count_complex_sentences(const std::vector<std::string>& sentences) {
    std::int64_t count = 0;
    for (const auto& sentence : sentences) {
        std::string lower = textprep::lowercase(sentence);
        bool hit = false;
        for (std::string_view conj : complex_conjunctions()) {
            std::size_t pos = 0;
            while ((pos = lower.find(conj, pos)) != std::string::npos) {
                bool left_ok = pos == 0 ||
                               !std::isalnum(static_cast<unsigned char>(lower[pos - 1]));
                std::size_t end = pos + conj.size();
                bool right_ok = end >= lower.size() ||
                                !std::isalnum(static_cast<unsigned char>(lower[end]));
                if (left_ok && right_ok) {
                    hit = true;
                    break;
                }
                pos = end;
            }
            if (hit) break;
        }
        if (hit) ++count;
    }
    return count;
}

/// Number of <code> elements in the body, inline and block alike.
inline std::int64_t count_code_elements(const textprep::PreparedText& prepared) {
    return static_cast<std::int64_t>(prepared.code_spans.size());
}

inline std::string compute_fingerprint(const FeatureSchema& schema) {
    Fnv1a h;
    h.update_field("codeneed-schema-v1");
    h.update_field(std::to_string(schema.thresholds.d_min_keywords));
    h.update_field(std::to_string(schema.thresholds.d_min_body));
    h.update_field(std::to_string(schema.thresholds.d_min_title));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", schema.thresholds.r_max);
    h.update_field(buf);
    h.update_field("keywords");
    for (const auto& k : schema.keywords) h.update_field(k);
    h.update_field("title_patterns");
    for (const auto& p : schema.title_patterns) h.update_field(p);
    h.update_field("body_patterns");
    for (const auto& p : schema.body_patterns) h.update_field(p);
    h.update_field("conjunctions");
    for (const auto& c : schema.conjunctions) h.update_field(c);
    h.update_field(schema.stopwords_hash);
    h.update_field(schema.lexicon_hash);
    h.update_field(schema.abbreviations_hash);
    return h.hex();
}

/// Learns the full schema from a training corpus (never call on test data).
template <typename Corpus>
inline FeatureSchema learn_schema(const Corpus& train, const textprep::TextResources& res,
                                  const postag::Tagger& tagger, const Thresholds& th = {}) {
    auto counts = detail::count_train(train, res, tagger);
    FeatureSchema schema;
    schema.thresholds = th;
    for (const auto& stat : detail::select(counts.stems, th.d_min_keywords, th.r_max))
        schema.keywords.push_back(stat.term);
    for (const auto& stat : detail::select(counts.title_patterns, th.d_min_title, th.r_max))
        schema.title_patterns.push_back(stat.term);
    for (const auto& stat : detail::select(counts.body_patterns, th.d_min_body, th.r_max))
        schema.body_patterns.push_back(stat.term);
    for (std::string_view c : complex_conjunctions()) schema.conjunctions.emplace_back(c);
    std::sort(schema.conjunctions.begin(), schema.conjunctions.end());
    schema.stopwords_hash = res.stopwords_hash;
    schema.lexicon_hash = res.lexicon_hash;
    schema.abbreviations_hash = res.abbreviations_hash;
    schema.fingerprint = compute_fingerprint(schema);
    return schema;
}

inline void verify_resources(const FeatureSchema& schema, const textprep::TextResources& res) {
    if (schema.stopwords_hash != res.stopwords_hash || schema.lexicon_hash != res.lexicon_hash ||
        schema.abbreviations_hash != res.abbreviations_hash) {
        throw SchemaMismatchError(
            "schema fingerprint does not match the loaded preprocessing data files");
    }
}

inline FeatureVector featurize(const corpus::QuestionRecord& q, const FeatureSchema& schema,
                               const textprep::TextResources& res, const postag::Tagger& tagger) {
    verify_resources(schema, res);
    AnalyzedQuestion a = analyze(q, res, tagger);

    FeatureVector fv;
    fv.keyword_counts.assign(schema.keywords.size(), 0);
    fv.title_pattern_counts.assign(schema.title_patterns.size(), 0);
    fv.body_pattern_counts.assign(schema.body_patterns.size(), 0);

    std::unordered_map<std::string_view, std::size_t> kw_index;
    for (std::size_t i = 0; i < schema.keywords.size(); ++i) kw_index[schema.keywords[i]] = i;
    for (const auto& s : a.stems) {
        if (auto it = kw_index.find(s); it != kw_index.end()) fv.keyword_counts[it->second]++;
    }

    std::unordered_map<std::string_view, std::size_t> title_index, body_index;
    for (std::size_t i = 0; i < schema.title_patterns.size(); ++i)
        title_index[schema.title_patterns[i]] = i;
    for (std::size_t i = 0; i < schema.body_patterns.size(); ++i)
        body_index[schema.body_patterns[i]] = i;

    detail::for_each_ngram(a.title_symbols, [&](const std::string& p) {
        if (auto it = title_index.find(p); it != title_index.end())
            fv.title_pattern_counts[it->second]++;
    });
    for (const auto& sent : a.body_symbols) {
        detail::for_each_ngram(sent, [&](const std::string& p) {
            if (auto it = body_index.find(p); it != body_index.end())
                fv.body_pattern_counts[it->second]++;
        });
    }

    fv.complex_sentence_count = count_complex_sentences(a.prep.plain_sentences);
    fv.code_element_count = count_code_elements(a.prep);
    return fv;
}

/// "RB+BEV+DT+NN" -> "[adverb] [verb be] [determiner] [noun]"
inline std::string render_pattern_display(std::string_view pattern) {
    std::string out;
    std::size_t start = 0;
    while (start <= pattern.size()) {
        std::size_t plus = pattern.find('+', start);
        std::string_view symbol = pattern.substr(
            start, plus == std::string_view::npos ? std::string_view::npos : plus - start);
        if (!symbol.empty()) {
            if (!out.empty()) out += ' ';
            out += '[';
            out += postag::display_name(symbol);
            out += ']';
        }
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    return out;
}

inline json schema_to_json(const FeatureSchema& s) {
    json j;
    j["format_version"] = 1;
    j["type"] = "codeneed-schema";
    j["thresholds"] = {{"d_min_keywords", s.thresholds.d_min_keywords},
                       {"d_min_body", s.thresholds.d_min_body},
                       {"d_min_title", s.thresholds.d_min_title},
                       {"r_max", s.thresholds.r_max}};
    j["keywords"] = s.keywords;
    j["title_patterns"] = s.title_patterns;
    j["body_patterns"] = s.body_patterns;
    j["conjunctions"] = s.conjunctions;
    j["data_hashes"] = {{"stopwords", s.stopwords_hash},
                        {"tagger_lexicon", s.lexicon_hash},
                        {"abbreviations", s.abbreviations_hash}};
    j["fingerprint"] = s.fingerprint;
    return j;
}

inline FeatureSchema schema_from_json(const json& j) {
    FeatureSchema s;
    try {
        s.thresholds.d_min_keywords = j.at("thresholds").at("d_min_keywords").get<std::uint64_t>();
        s.thresholds.d_min_body = j.at("thresholds").at("d_min_body").get<std::uint64_t>();
        s.thresholds.d_min_title = j.at("thresholds").at("d_min_title").get<std::uint64_t>();
        s.thresholds.r_max = j.at("thresholds").at("r_max").get<double>();
        s.keywords = j.at("keywords").get<std::vector<std::string>>();
        s.title_patterns = j.at("title_patterns").get<std::vector<std::string>>();
        s.body_patterns = j.at("body_patterns").get<std::vector<std::string>>();
        s.conjunctions = j.at("conjunctions").get<std::vector<std::string>>();
        s.stopwords_hash = j.at("data_hashes").at("stopwords").get<std::string>();
        s.lexicon_hash = j.at("data_hashes").at("tagger_lexicon").get<std::string>();
        s.abbreviations_hash = j.at("data_hashes").at("abbreviations").get<std::string>();
        s.fingerprint = j.at("fingerprint").get<std::string>();
    } catch (const json::exception& e) {
        throw SchemaMismatchError(std::string("malformed schema file: ") + e.what());
    }
    auto sorted_unique = [](const std::vector<std::string>& v) {
        return std::is_sorted(v.begin(), v.end()) &&
               std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!sorted_unique(s.keywords) || !sorted_unique(s.title_patterns) ||
        !sorted_unique(s.body_patterns))
        throw SchemaMismatchError("schema lists must be sorted and duplicate-free");
    for (const auto* list : {&s.title_patterns, &s.body_patterns}) {
        for (const auto& p : *list) {
            auto len = 1 + std::count(p.begin(), p.end(), '+');
            if (len < 3 || len > 6)
                throw SchemaMismatchError("schema pattern length outside [3, 6]: " + p);
        }
    }
    if (compute_fingerprint(s) != s.fingerprint)
        throw SchemaMismatchError("schema fingerprint does not match schema contents");
    return s;
}

/// CSV export; header mirrors the schema vector layout.
inline void write_feature_csv(std::ostream& out, const FeatureSchema& schema,
                              const std::vector<std::int64_t>& ids,
                              const std::vector<int>& labels,
                              const std::vector<FeatureVector>& vectors) {
    out << "id,needs_code";
    for (const auto& k : schema.keywords) out << ",kw:" << k;
    for (const auto& p : schema.title_patterns) out << ",tp:" << p;
    for (const auto& p : schema.body_patterns) out << ",bp:" << p;
    out << ",complex_sentences,code_elements\n";
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        out << ids[i] << ',' << labels[i];
        const auto& fv = vectors[i];
        for (auto v : fv.keyword_counts) out << ',' << v;
        for (auto v : fv.title_pattern_counts) out << ',' << v;
        for (auto v : fv.body_pattern_counts) out << ',' << v;
        out << ',' << fv.complex_sentence_count << ',' << fv.code_element_count << '\n';
    }
}

} // namespace codeneed::features
