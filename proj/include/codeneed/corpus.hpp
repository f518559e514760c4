#pragma once
// Question-record ingestion and heuristic labeling. Input is line-delimited
// JSON, one question per line; labeling assigns one of four categories from
// code-request comments, block-code presence, and revision history.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "codeneed/errors.hpp"
#include "codeneed/html.hpp"
#include "codeneed/textprep.hpp"

namespace codeneed::corpus {

using json = nlohmann::json;

struct CommentRecord {
    std::string text;
    std::int64_t creation_utc = 0;
};

struct AnswerRecord {
    std::int64_t creation_utc = 0;
    bool is_accepted = false;
};

struct RevisionRecord {
    std::int64_t creation_utc = 0;
    std::string body_html;
};

struct QuestionRecord {
    std::int64_t id = 0;
    std::string title;
    std::string body_html;
    std::int64_t creation_utc = 0;
    std::int64_t reputation_at_post = 0;
    std::vector<CommentRecord> comments;   // sorted ascending by creation_utc
    std::vector<AnswerRecord> answers;     // sorted ascending by creation_utc
    std::vector<RevisionRecord> revisions; // sorted ascending by creation_utc

    std::optional<AnswerRecord> accepted_answer() const {
        for (const auto& a : answers)
            if (a.is_accepted) return a;
        return std::nullopt;
    }
};

enum class Category { MICO, COAC, CODS, DONC };

inline std::string_view category_name(Category c) {
    switch (c) {
        case Category::MICO: return "MICO";
        case Category::COAC: return "COAC";
        case Category::CODS: return "CODS";
        case Category::DONC: return "DONC";
    }
    return "DONC";
}

inline std::optional<Category> category_from_name(std::string_view name) {
    if (name == "MICO") return Category::MICO;
    if (name == "COAC") return Category::COAC;
    if (name == "CODS") return Category::CODS;
    if (name == "DONC") return Category::DONC;
    return std::nullopt;
}

struct CategoryLabel {
    Category category = Category::DONC;
    bool needs_code = false;
    bool low_confidence = false; // COAC assigned without revision evidence
};

struct LabeledQuestion {
    QuestionRecord question;
    CategoryLabel label;
};

// The key phrases that request code in comments, in their canonical order.
inline const std::array<std::string_view, 17>& key_phrases() {
    static const std::array<std::string_view, 17> phrases = {
        "add code",          "add your code",     "add the code",
        "attach code",       "attach your code",  "attach the code",
        "include code",      "include your code", "include the code",
        "give your code",    "provide code",      "provide the code",
        "provide your code", "show your code",    "what you tried",
        "post your code",    "post the code please",
    };
    return phrases;
}

/// First key phrase (in canonical order) found as a case-insensitive
/// substring of the whitespace-normalized comment text.
inline std::optional<std::string_view> match_code_request(std::string_view comment_text) {
    std::string normalized = textprep::lowercase(textprep::normalize_whitespace(comment_text));
    for (std::string_view phrase : key_phrases()) {
        if (normalized.find(phrase) != std::string::npos) return phrase;
    }
    return std::nullopt;
}

/// True iff the body has a <code> element nested inside <pre>.
inline bool has_block_code(std::string_view body_html) {
    return html::has_block_code(body_html);
}

// Decision procedure over the final body:
//   1. request = earliest comment matching a key phrase
//   2. request && no block code            -> MICO
//   3. request && block code               -> COAC, unless a revision shows
//      the code existed strictly before the request (-> CODS); a revision at
//      exactly the request time counts as after
//   4. no request && block code            -> CODS
//   5. otherwise                           -> DONC
/// Earliest revision whose body carries block code, if any.
inline std::optional<std::int64_t> first_code_revision_time(const QuestionRecord& q) {
    std::optional<std::int64_t> t;
    for (const auto& rev : q.revisions) {
        if ((!t || rev.creation_utc < *t) && has_block_code(rev.body_html)) t = rev.creation_utc;
    }
    return t;
}

inline CategoryLabel categorize(const QuestionRecord& q) {
    std::optional<std::int64_t> request_time;
    for (const auto& c : q.comments) {
        if ((!request_time || c.creation_utc < *request_time) && match_code_request(c.text))
            request_time = c.creation_utc;
    }
    const bool block = has_block_code(q.body_html);

    CategoryLabel label;
    if (request_time) {
        if (!block) {
            label.category = Category::MICO;
        } else if (q.revisions.empty()) {
            label.category = Category::COAC;
            label.low_confidence = true;
        } else {
            std::optional<std::int64_t> first_code_time = first_code_revision_time(q);
            if (first_code_time && *first_code_time < *request_time) {
                label.category = Category::CODS;
            } else {
                label.category = Category::COAC;
            }
        }
    } else {
        label.category = block ? Category::CODS : Category::DONC;
    }
    label.needs_code = label.category != Category::DONC;
    return label;
}

namespace detail {

inline std::int64_t require_int(const json& j, const char* field, std::size_t line_no) {
    auto it = j.find(field);
    if (it == j.end()) throw ParseError(line_no, std::string("missing field '") + field + "'");
    if (!it->is_number_integer())
        throw ParseError(line_no, std::string("field '") + field + "' must be an integer");
    return it->get<std::int64_t>();
}

inline std::string require_string(const json& j, const char* field, std::size_t line_no) {
    auto it = j.find(field);
    if (it == j.end()) throw ParseError(line_no, std::string("missing field '") + field + "'");
    if (!it->is_string())
        throw ParseError(line_no, std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
}

inline const json& require_array(const json& j, const char* field, std::size_t line_no) {
    auto it = j.find(field);
    if (it == j.end()) throw ParseError(line_no, std::string("missing field '") + field + "'");
    if (!it->is_array())
        throw ParseError(line_no, std::string("field '") + field + "' must be an array");
    return *it;
}

inline QuestionRecord parse_record(const json& j, std::size_t line_no) {
    QuestionRecord q;
    q.id = require_int(j, "id", line_no);
    q.title = require_string(j, "title", line_no);
    q.body_html = require_string(j, "body_html", line_no);
    q.creation_utc = require_int(j, "creation_utc", line_no);
    q.reputation_at_post = require_int(j, "reputation_at_post", line_no);
    if (q.reputation_at_post < 0)
        throw ParseError(line_no, "reputation_at_post must be non-negative");

    for (const auto& c : require_array(j, "comments", line_no)) {
        CommentRecord rec;
        rec.text = require_string(c, "text", line_no);
        rec.creation_utc = require_int(c, "creation_utc", line_no);
        if (rec.text.empty()) throw ParseError(line_no, "comment text must be non-empty");
        q.comments.push_back(std::move(rec));
    }
    for (const auto& a : require_array(j, "answers", line_no)) {
        AnswerRecord rec;
        rec.creation_utc = require_int(a, "creation_utc", line_no);
        auto it = a.find("is_accepted");
        if (it == a.end() || !it->is_boolean())
            throw ParseError(line_no, "answer needs boolean 'is_accepted'");
        rec.is_accepted = it->get<bool>();
        q.answers.push_back(rec);
    }
    if (auto it = j.find("revisions"); it != j.end()) {
        if (!it->is_array()) throw ParseError(line_no, "field 'revisions' must be an array");
        for (const auto& r : *it) {
            RevisionRecord rec;
            rec.creation_utc = require_int(r, "creation_utc", line_no);
            rec.body_html = require_string(r, "body_html", line_no);
            q.revisions.push_back(std::move(rec));
        }
    }

    auto by_time = [](const auto& a, const auto& b) { return a.creation_utc < b.creation_utc; };
    std::stable_sort(q.comments.begin(), q.comments.end(), by_time);
    std::stable_sort(q.answers.begin(), q.answers.end(), by_time);
    std::stable_sort(q.revisions.begin(), q.revisions.end(), by_time);

    int accepted = 0;
    for (const auto& a : q.answers) accepted += a.is_accepted ? 1 : 0;
    if (accepted > 1) throw ParseError(line_no, "more than one accepted answer");

    auto check_not_before = [&](std::int64_t t, const char* what) {
        if (t < q.creation_utc)
            throw ParseError(line_no, std::string(what) + " predates question creation");
    };
    if (!q.comments.empty()) check_not_before(q.comments.front().creation_utc, "comment");
    if (!q.answers.empty()) check_not_before(q.answers.front().creation_utc, "answer");
    if (!q.revisions.empty()) check_not_before(q.revisions.front().creation_utc, "revision");
    return q;
}

inline json record_to_json(const QuestionRecord& q) {
    json j;
    j["id"] = q.id;
    j["title"] = q.title;
    j["body_html"] = q.body_html;
    j["creation_utc"] = q.creation_utc;
    j["reputation_at_post"] = q.reputation_at_post;
    j["comments"] = json::array();
    for (const auto& c : q.comments)
        j["comments"].push_back({{"text", c.text}, {"creation_utc", c.creation_utc}});
    j["answers"] = json::array();
    for (const auto& a : q.answers)
        j["answers"].push_back({{"creation_utc", a.creation_utc}, {"is_accepted", a.is_accepted}});
    j["revisions"] = json::array();
    for (const auto& r : q.revisions)
        j["revisions"].push_back({{"creation_utc", r.creation_utc}, {"body_html", r.body_html}});
    return j;
}

} // namespace detail

/// Parses line-delimited question records; empty lines are skipped.
inline std::vector<QuestionRecord> parse_question_stream(std::istream& in) {
    std::vector<QuestionRecord> records;
    std::unordered_set<std::int64_t> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (textprep::normalize_whitespace(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw ParseError(line_no, "record must be a JSON object");
        QuestionRecord q = detail::parse_record(j, line_no);
        if (!seen_ids.insert(q.id).second)
            throw ParseError(line_no, "duplicate id " + std::to_string(q.id));
        records.push_back(std::move(q));
    }
    return records;
}

inline void write_question(std::ostream& out, const QuestionRecord& q) {
    out << detail::record_to_json(q).dump() << '\n';
}

inline void write_labeled(std::ostream& out, const LabeledQuestion& lq) {
    json j = detail::record_to_json(lq.question);
    j["category"] = std::string(category_name(lq.label.category));
    j["needs_code"] = lq.label.needs_code;
    j["low_confidence"] = lq.label.low_confidence;
    out << j.dump() << '\n';
}

/// Parses records already carrying `category` / `needs_code` fields.
inline std::vector<LabeledQuestion> parse_labeled_stream(std::istream& in) {
    std::vector<LabeledQuestion> out;
    std::unordered_set<std::int64_t> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (textprep::normalize_whitespace(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw ParseError(line_no, "record must be a JSON object");
        LabeledQuestion lq;
        lq.question = detail::parse_record(j, line_no);
        if (!seen_ids.insert(lq.question.id).second)
            throw ParseError(line_no, "duplicate id " + std::to_string(lq.question.id));
        std::string cat = detail::require_string(j, "category", line_no);
        auto parsed = category_from_name(cat);
        if (!parsed) throw ParseError(line_no, "unknown category '" + cat + "'");
        lq.label.category = *parsed;
        auto it = j.find("needs_code");
        if (it == j.end() || !it->is_boolean())
            throw ParseError(line_no, "missing boolean field 'needs_code'");
        lq.label.needs_code = it->get<bool>();
        if (lq.label.needs_code != (lq.label.category != Category::DONC))
            throw ParseError(line_no, "needs_code inconsistent with category");
        if (auto lc = j.find("low_confidence"); lc != j.end() && lc->is_boolean())
            lq.label.low_confidence = lc->get<bool>();
        out.push_back(std::move(lq));
    }
    return out;
}

struct SplitResult {
    std::vector<LabeledQuestion> train;
    std::vector<LabeledQuestion> test;
};

// Within each binary class independently: sort ascending by creation time and
// take the oldest round(n * fraction) as training data. Rounding to nearest
// matches the published 1207 -> 845 split; the result is clamped so both
// partitions stay non-empty.
inline SplitResult chronological_split(const std::vector<LabeledQuestion>& labeled,
                                       double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw CorpusError("train_fraction must be in (0, 1)");

    std::vector<LabeledQuestion> classes[2];
    for (const auto& lq : labeled) classes[lq.label.needs_code ? 1 : 0].push_back(lq);

    SplitResult result;
    for (auto& cls : classes) {
        if (cls.size() < 2)
            throw CorpusError("each class needs at least 2 questions to split (got " +
                              std::to_string(cls.size()) + ")");
        std::sort(cls.begin(), cls.end(), [](const LabeledQuestion& a, const LabeledQuestion& b) {
            if (a.question.creation_utc != b.question.creation_utc)
                return a.question.creation_utc < b.question.creation_utc;
            return a.question.id < b.question.id;
        });
        auto n = static_cast<long long>(cls.size());
        long long k = std::llround(static_cast<double>(n) * train_fraction);
        k = std::clamp(k, 1LL, n - 1);
        result.train.insert(result.train.end(), cls.begin(), cls.begin() + k);
        result.test.insert(result.test.end(), cls.begin() + k, cls.end());
    }

    auto canonical = [](const LabeledQuestion& a, const LabeledQuestion& b) {
        if (a.question.creation_utc != b.question.creation_utc)
            return a.question.creation_utc < b.question.creation_utc;
        return a.question.id < b.question.id;
    };
    std::sort(result.train.begin(), result.train.end(), canonical);
    std::sort(result.test.begin(), result.test.end(), canonical);
    return result;
}

} // namespace codeneed::corpus
