#pragma once
// Effect analysis over a labeled corpus: resolved/answered contingency tables
// with chi-squared tests, answer-delay distributions with pairwise
// Mann-Whitney + Cliff's delta over the five group pairs, and confounder
// slices by submitter reputation and submission time. Categories under study
// are the three needs-code ones; DONC questions do not participate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "codeneed/corpus.hpp"
#include "codeneed/stats.hpp"

namespace codeneed::analysis {

using json = nlohmann::json;

enum class ReputationBucket { New, LowReputed, Established, Trusted };

inline std::string_view bucket_name(ReputationBucket b) {
    switch (b) {
        case ReputationBucket::New: return "New";
        case ReputationBucket::LowReputed: return "LowReputed";
        case ReputationBucket::Established: return "Established";
        case ReputationBucket::Trusted: return "Trusted";
    }
    return "New";
}

/// New < 10, LowReputed < 1000, Established < 20000, Trusted otherwise.
inline ReputationBucket reputation_bucket(std::int64_t score) {
    if (score < 10) return ReputationBucket::New;
    if (score < 1000) return ReputationBucket::LowReputed;
    if (score < 20000) return ReputationBucket::Established;
    return ReputationBucket::Trusted;
}

struct TimeSlot {
    bool day = false;     // within the configured working-hours window (UTC)
    bool weekend = false; // Saturday or Sunday (UTC)
};

/// Day iff day_start <= hour < day_end (UTC). 1970-01-01 was a Thursday.
inline TimeSlot time_slot(std::int64_t creation_utc, int day_start = 8, int day_end = 20) {
    std::int64_t days = creation_utc / 86400;
    std::int64_t secs = creation_utc % 86400;
    if (secs < 0) {
        secs += 86400;
        days -= 1;
    }
    int hour = static_cast<int>(secs / 3600);
    int dow = static_cast<int>(((days % 7) + 7 + 4) % 7); // 0 = Sunday
    TimeSlot slot;
    slot.day = hour >= day_start && hour < day_end;
    slot.weekend = dow == 0 || dow == 6;
    return slot;
}

struct DelayInfo {
    std::optional<double> delay_minutes;     // accepted answer - question submission
    std::optional<double> coac_star_minutes; // accepted answer - first code-bearing revision
    bool discarded = false;                  // COAC answer accepted before the code arrived
};

/// Delay of the accepted answer in minutes; absent when unresolved. For COAC
/// questions the delay from code addition (COAC*) comes along when revision
/// data pinpoints the code; an answer accepted before the code was added is
/// marked discarded.
inline DelayInfo answer_delays(const corpus::LabeledQuestion& lq) {
    DelayInfo info;
    auto accepted = lq.question.accepted_answer();
    if (!accepted) return info;
    info.delay_minutes =
        static_cast<double>(accepted->creation_utc - lq.question.creation_utc) / 60.0;
    if (lq.label.category == corpus::Category::COAC) {
        std::optional<std::int64_t> code_time = corpus::first_code_revision_time(lq.question);
        if (code_time) {
            if (accepted->creation_utc < *code_time) {
                info.discarded = true;
            } else {
                info.coac_star_minutes =
                    static_cast<double>(accepted->creation_utc - *code_time) / 60.0;
            }
        }
    }
    return info;
}

inline double round1(double x) {
    return static_cast<double>(std::llround(x * 10.0)) / 10.0;
}

namespace detail {

inline double median_of_sorted(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace detail

struct CountRow {
    std::string category;
    std::uint64_t yes = 0; // resolved / answered
    std::uint64_t no = 0;  // unresolved / unanswered
    double yes_pct() const {
        return yes + no == 0 ? 0.0
                             : 100.0 * static_cast<double>(yes) /
                                   static_cast<double>(yes + no);
    }
};

struct ChiOutcome {
    bool run = false;
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    std::string skip_reason;
};

struct DelaySummary {
    std::string group; // MICO, COAC, CODS, COAC*
    std::vector<double> samples; // sorted ascending
    double median = 0.0;
    double mean = 0.0;
};

struct PairwiseOutcome {
    std::string group; // G1..G5
    std::string a, b;
    bool run = false;
    std::string skip_reason;
    double u = 0.0;
    double p_value = 1.0;
    double delta = 0.0;
    std::string magnitude;
};

struct SliceCount {
    std::string category;
    std::string slice; // bucket or slot name
    std::uint64_t yes = 0;
    std::uint64_t total = 0;
};

struct SliceDelay {
    std::string category; // includes COAC*
    std::string slice;
    std::size_t n = 0;
    double median = 0.0;
    double mean = 0.0;
};

struct EffectOptions {
    int day_start = 8;
    int day_end = 20;
};

struct EffectReport {
    std::vector<std::string> categories_present; // subset of MICO, COAC, CODS
    std::vector<std::string> gaps;               // explicit omissions
    std::uint64_t discarded_coac = 0;

    std::vector<CountRow> resolved_rows; // discarded COAC excluded
    ChiOutcome resolved_chi;
    std::vector<CountRow> answered_rows; // all questions of the category
    ChiOutcome answered_chi;

    std::vector<DelaySummary> delays; // MICO, COAC, CODS, COAC*
    std::vector<PairwiseOutcome> pairwise;

    std::vector<std::string> buckets_present;
    std::vector<std::string> buckets_dropped;
    std::vector<SliceCount> reputation_accepted;
    std::vector<SliceDelay> reputation_delays;
    std::vector<SliceCount> reputation_unanswered;

    std::vector<SliceCount> time_accepted;   // slices: Day, Night, Weekday, Weekend
    std::vector<SliceDelay> time_delays;
    std::vector<SliceCount> time_unanswered;
};

namespace detail {

using corpus::Category;
using corpus::LabeledQuestion;

struct PerQuestion {
    const LabeledQuestion* lq;
    DelayInfo delay;
    ReputationBucket bucket;
    TimeSlot slot;
};

inline ChiOutcome run_chi(const std::vector<CountRow>& rows) {
    ChiOutcome out;
    if (rows.size() < 2) {
        out.skip_reason = "fewer than 2 categories present";
        return out;
    }
    stats::ContingencyTable table;
    for (const auto& r : rows) {
        table.row_labels.push_back(r.category);
        table.counts.push_back({static_cast<double>(r.yes), static_cast<double>(r.no)});
    }
    table.col_labels = {"yes", "no"};
    try {
        stats::TestResult res = stats::chi_squared(table);
        out.run = true;
        out.statistic = res.statistic;
        out.dof = res.dof;
        out.p_value = res.p_value.value_or(1.0);
    } catch (const StatsError& e) {
        out.skip_reason = e.what();
    }
    return out;
}

} // namespace detail

inline EffectReport effect_report(const std::vector<corpus::LabeledQuestion>& labeled,
                                  const EffectOptions& options = {}) {
    using corpus::Category;
    static const Category kCats[3] = {Category::MICO, Category::COAC, Category::CODS};

    EffectReport report;
    std::vector<detail::PerQuestion> items;
    for (const auto& lq : labeled) {
        if (lq.label.category == Category::DONC) continue;
        detail::PerQuestion pq;
        pq.lq = &lq;
        pq.delay = answer_delays(lq);
        pq.bucket = reputation_bucket(lq.question.reputation_at_post);
        pq.slot = time_slot(lq.question.creation_utc, options.day_start, options.day_end);
        if (pq.delay.discarded) ++report.discarded_coac;
        items.push_back(pq);
    }
    // Deterministic aggregation order: category enum order, then question id.
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.lq->label.category != b.lq->label.category)
            return static_cast<int>(a.lq->label.category) < static_cast<int>(b.lq->label.category);
        return a.lq->question.id < b.lq->question.id;
    });

    std::map<Category, std::vector<const detail::PerQuestion*>> by_cat;
    for (const auto& pq : items) by_cat[pq.lq->label.category].push_back(&pq);

    for (Category c : kCats) {
        std::string name(corpus::category_name(c));
        if (by_cat.count(c)) {
            report.categories_present.push_back(name);
        } else {
            report.gaps.push_back(name + " absent: rows omitted, pairwise tests skipped");
        }
    }

    // Resolved/unresolved (COAC drops discarded) and answered/unanswered.
    for (Category c : kCats) {
        auto it = by_cat.find(c);
        if (it == by_cat.end()) continue;
        CountRow resolved{std::string(corpus::category_name(c)), 0, 0};
        CountRow answered{std::string(corpus::category_name(c)), 0, 0};
        for (const auto* pq : it->second) {
            bool has_accept = pq->delay.delay_minutes.has_value();
            if (!pq->delay.discarded) {
                if (has_accept) ++resolved.yes;
                else ++resolved.no;
            }
            if (pq->lq->question.answers.empty()) ++answered.no;
            else ++answered.yes;
        }
        report.resolved_rows.push_back(resolved);
        report.answered_rows.push_back(answered);
    }
    report.resolved_chi = detail::run_chi(report.resolved_rows);
    report.answered_chi = detail::run_chi(report.answered_rows);

    // Delay samples per group, plus COAC*.
    auto collect = [&](Category c, bool star) {
        std::vector<double> v;
        auto it = by_cat.find(c);
        if (it == by_cat.end()) return v;
        for (const auto* pq : it->second) {
            if (pq->delay.discarded) continue;
            if (star) {
                if (pq->delay.coac_star_minutes) v.push_back(*pq->delay.coac_star_minutes);
            } else if (pq->delay.delay_minutes) {
                v.push_back(*pq->delay.delay_minutes);
            }
        }
        std::sort(v.begin(), v.end());
        return v;
    };
    std::map<std::string, std::vector<double>> samples;
    samples["MICO"] = collect(Category::MICO, false);
    samples["COAC"] = collect(Category::COAC, false);
    samples["CODS"] = collect(Category::CODS, false);
    samples["COAC*"] = collect(Category::COAC, true);
    for (const char* name : {"MICO", "COAC", "CODS", "COAC*"}) {
        DelaySummary s;
        s.group = name;
        s.samples = samples[name];
        s.median = detail::median_of_sorted(s.samples);
        s.mean = detail::mean_of(s.samples);
        report.delays.push_back(std::move(s));
    }

    struct GroupDef {
        const char* id;
        const char* a;
        const char* b;
    };
    static const GroupDef kGroups[5] = {{"G1", "MICO", "COAC"},
                                        {"G2", "COAC", "CODS"},
                                        {"G3", "MICO", "CODS"},
                                        {"G4", "MICO", "COAC*"},
                                        {"G5", "COAC*", "CODS"}};
    for (const auto& g : kGroups) {
        PairwiseOutcome out;
        out.group = g.id;
        out.a = g.a;
        out.b = g.b;
        const auto& sa = samples[g.a];
        const auto& sb = samples[g.b];
        if (sa.empty() || sb.empty()) {
            out.skip_reason = "empty delay sample";
        } else {
            stats::TestResult mw = stats::mann_whitney(sa, sb);
            stats::TestResult cd = stats::cliffs_delta(sa, sb);
            out.run = true;
            out.u = mw.statistic;
            out.p_value = mw.p_value.value_or(1.0);
            out.delta = cd.statistic;
            out.magnitude = std::string(stats::magnitude_name(*cd.magnitude));
        }
        report.pairwise.push_back(std::move(out));
    }

    // Reputation buckets; a Trusted bucket with fewer than 3 questions is
    // dropped outright instead of shown as a degenerate row.
    static const ReputationBucket kBuckets[4] = {
        ReputationBucket::New, ReputationBucket::LowReputed, ReputationBucket::Established,
        ReputationBucket::Trusted};
    std::map<ReputationBucket, std::size_t> bucket_totals;
    for (const auto& pq : items) bucket_totals[pq.bucket]++;
    std::vector<ReputationBucket> kept_buckets;
    for (ReputationBucket b : kBuckets) {
        std::size_t total = bucket_totals.count(b) ? bucket_totals[b] : 0;
        if (b == ReputationBucket::Trusted && total < 3) {
            if (total > 0) report.buckets_dropped.emplace_back(bucket_name(b));
            continue;
        }
        if (total == 0) continue;
        kept_buckets.push_back(b);
        report.buckets_present.emplace_back(bucket_name(b));
    }

    auto slice_tables = [&](auto slice_of, const std::vector<std::string>& slice_names,
                            std::vector<SliceCount>& accepted, std::vector<SliceDelay>& delays,
                            std::vector<SliceCount>& unanswered) {
        for (Category c : kCats) {
            auto it = by_cat.find(c);
            if (it == by_cat.end()) continue;
            std::string cat_name(corpus::category_name(c));
            for (const auto& slice : slice_names) {
                SliceCount acc{cat_name, slice, 0, 0};
                SliceCount unans{cat_name, slice, 0, 0};
                std::vector<double> delay_samples, star_samples;
                for (const auto* pq : it->second) {
                    if (slice_of(*pq) != slice) continue;
                    ++acc.total;
                    ++unans.total;
                    if (pq->delay.delay_minutes) ++acc.yes;
                    if (pq->lq->question.answers.empty()) ++unans.yes;
                    if (!pq->delay.discarded && pq->delay.delay_minutes)
                        delay_samples.push_back(*pq->delay.delay_minutes);
                    if (!pq->delay.discarded && pq->delay.coac_star_minutes)
                        star_samples.push_back(*pq->delay.coac_star_minutes);
                }
                if (acc.total == 0) continue;
                accepted.push_back(acc);
                unanswered.push_back(unans);
                std::sort(delay_samples.begin(), delay_samples.end());
                delays.push_back({cat_name, slice, delay_samples.size(),
                                  detail::median_of_sorted(delay_samples),
                                  detail::mean_of(delay_samples)});
                if (c == Category::COAC && !star_samples.empty()) {
                    std::sort(star_samples.begin(), star_samples.end());
                    delays.push_back({"COAC*", slice, star_samples.size(),
                                      detail::median_of_sorted(star_samples),
                                      detail::mean_of(star_samples)});
                }
            }
        }
    };

    std::vector<std::string> bucket_names;
    for (ReputationBucket b : kept_buckets) bucket_names.emplace_back(bucket_name(b));
    slice_tables(
        [&](const detail::PerQuestion& pq) { return std::string(bucket_name(pq.bucket)); },
        bucket_names, report.reputation_accepted, report.reputation_delays,
        report.reputation_unanswered);

    // Hour and day slots are two independent slicings of the same questions.
    for (const char* slot : {"Day", "Night", "Weekday", "Weekend"}) {
        std::string slot_str(slot);
        auto member = [&](const detail::PerQuestion& pq) {
            if (slot_str == "Day") return pq.slot.day;
            if (slot_str == "Night") return !pq.slot.day;
            if (slot_str == "Weekday") return !pq.slot.weekend;
            return pq.slot.weekend;
        };
        for (Category c : kCats) {
            auto it = by_cat.find(c);
            if (it == by_cat.end()) continue;
            std::string cat_name(corpus::category_name(c));
            SliceCount acc{cat_name, slot_str, 0, 0};
            SliceCount unans{cat_name, slot_str, 0, 0};
            std::vector<double> delay_samples, star_samples;
            for (const auto* pq : it->second) {
                if (!member(*pq)) continue;
                ++acc.total;
                ++unans.total;
                if (pq->delay.delay_minutes) ++acc.yes;
                if (pq->lq->question.answers.empty()) ++unans.yes;
                if (!pq->delay.discarded && pq->delay.delay_minutes)
                    delay_samples.push_back(*pq->delay.delay_minutes);
                if (!pq->delay.discarded && pq->delay.coac_star_minutes)
                    star_samples.push_back(*pq->delay.coac_star_minutes);
            }
            if (acc.total == 0) continue;
            report.time_accepted.push_back(acc);
            report.time_unanswered.push_back(unans);
            std::sort(delay_samples.begin(), delay_samples.end());
            report.time_delays.push_back({cat_name, slot_str, delay_samples.size(),
                                          detail::median_of_sorted(delay_samples),
                                          detail::mean_of(delay_samples)});
            if (c == Category::COAC && !star_samples.empty()) {
                std::sort(star_samples.begin(), star_samples.end());
                report.time_delays.push_back({"COAC*", slot_str, star_samples.size(),
                                              detail::median_of_sorted(star_samples),
                                              detail::mean_of(star_samples)});
            }
        }
    }
    return report;
}

inline json effect_report_to_json(const EffectReport& r) {
    json j;
    j["format_version"] = 1;
    j["type"] = "codeneed-effect-report";
    j["categories_present"] = r.categories_present;
    j["gaps"] = r.gaps;
    j["discarded_coac_pre_code_acceptances"] = r.discarded_coac;

    auto rows_json = [](const std::vector<CountRow>& rows, const char* yes_name,
                        const char* no_name) {
        json arr = json::array();
        for (const auto& row : rows) {
            arr.push_back({{"category", row.category},
                           {yes_name, row.yes},
                           {no_name, row.no},
                           {"pct", round1(row.yes_pct())}});
        }
        return arr;
    };
    auto chi_json = [](const ChiOutcome& c) {
        json out;
        out["run"] = c.run;
        if (c.run) {
            out["statistic"] = c.statistic;
            out["dof"] = c.dof;
            out["p_value"] = c.p_value;
        } else {
            out["skip_reason"] = c.skip_reason;
        }
        return out;
    };
    j["resolved"] = {{"rows", rows_json(r.resolved_rows, "resolved", "unresolved")},
                     {"chi_squared", chi_json(r.resolved_chi)}};
    j["answered"] = {{"rows", rows_json(r.answered_rows, "answered", "unanswered")},
                     {"chi_squared", chi_json(r.answered_chi)}};

    json delays = json::array();
    for (const auto& d : r.delays) {
        delays.push_back({{"group", d.group},
                          {"n", d.samples.size()},
                          {"median_minutes", d.median},
                          {"mean_minutes", d.mean}});
    }
    j["delays"] = delays;

    json pairwise = json::array();
    for (const auto& p : r.pairwise) {
        json row = {{"group", p.group}, {"a", p.a}, {"b", p.b}, {"run", p.run}};
        if (p.run) {
            row["u"] = p.u;
            row["p_value"] = p.p_value;
            row["cliffs_delta"] = p.delta;
            row["magnitude"] = p.magnitude;
        } else {
            row["skip_reason"] = p.skip_reason;
        }
        pairwise.push_back(std::move(row));
    }
    j["pairwise_delay_tests"] = pairwise;

    auto slice_counts_json = [](const std::vector<SliceCount>& rows) {
        json arr = json::array();
        for (const auto& s : rows) {
            double pct = s.total == 0 ? 0.0
                                      : 100.0 * static_cast<double>(s.yes) /
                                            static_cast<double>(s.total);
            arr.push_back({{"category", s.category},
                           {"slice", s.slice},
                           {"count", s.yes},
                           {"total", s.total},
                           {"pct", round1(pct)}});
        }
        return arr;
    };
    auto slice_delays_json = [](const std::vector<SliceDelay>& rows) {
        json arr = json::array();
        for (const auto& s : rows) {
            arr.push_back({{"category", s.category},
                           {"slice", s.slice},
                           {"n", s.n},
                           {"median_minutes", s.median},
                           {"mean_minutes", s.mean}});
        }
        return arr;
    };
    j["reputation"] = {{"buckets", r.buckets_present},
                       {"dropped_buckets", r.buckets_dropped},
                       {"accepted", slice_counts_json(r.reputation_accepted)},
                       {"delays", slice_delays_json(r.reputation_delays)},
                       {"unanswered", slice_counts_json(r.reputation_unanswered)}};
    j["time_slots"] = {{"accepted", slice_counts_json(r.time_accepted)},
                       {"delays", slice_delays_json(r.time_delays)},
                       {"unanswered", slice_counts_json(r.time_unanswered)}};
    return j;
}

inline std::string effect_report_to_text(const EffectReport& r) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(1);

    out << "== Resolved / unresolved ==\n";
    for (const auto& row : r.resolved_rows) {
        out << "  " << row.category << ": " << row.yes << "/" << (row.yes + row.no) << " ("
            << row.yes_pct() << "% resolved)\n";
    }
    if (r.resolved_chi.run) {
        out.precision(4);
        out << "  chi2 = " << r.resolved_chi.statistic << ", dof = " << r.resolved_chi.dof
            << ", p = " << r.resolved_chi.p_value << "\n";
        out.precision(1);
    } else {
        out << "  chi-squared skipped: " << r.resolved_chi.skip_reason << "\n";
    }
    if (r.discarded_coac > 0)
        out << "  (" << r.discarded_coac << " COAC answers accepted before code, discarded)\n";

    out << "== Answered / unanswered ==\n";
    for (const auto& row : r.answered_rows) {
        out << "  " << row.category << ": " << row.yes << "/" << (row.yes + row.no) << " ("
            << row.yes_pct() << "% answered)\n";
    }
    if (r.answered_chi.run) {
        out.precision(4);
        out << "  chi2 = " << r.answered_chi.statistic << ", dof = " << r.answered_chi.dof
            << ", p = " << r.answered_chi.p_value << "\n";
        out.precision(1);
    } else {
        out << "  chi-squared skipped: " << r.answered_chi.skip_reason << "\n";
    }

    out << "== Accepted-answer delays (minutes) ==\n";
    for (const auto& d : r.delays) {
        out << "  " << d.group << ": n = " << d.samples.size() << ", median = " << d.median
            << ", mean = " << d.mean << "\n";
    }
    out << "== Pairwise delay tests ==\n";
    for (const auto& p : r.pairwise) {
        out << "  " << p.group << " (" << p.a << " vs " << p.b << "): ";
        if (p.run) {
            out.precision(4);
            out << "U = " << p.u << ", p = " << p.p_value << ", delta = " << p.delta << " ("
                << p.magnitude << ")\n";
            out.precision(1);
        } else {
            out << "skipped: " << p.skip_reason << "\n";
        }
    }

    auto print_counts = [&](const char* header, const std::vector<SliceCount>& rows) {
        out << header << "\n";
        for (const auto& s : rows) {
            double pct = s.total == 0 ? 0.0 : 100.0 * static_cast<double>(s.yes) /
                                                  static_cast<double>(s.total);
            out << "  " << s.category << " / " << s.slice << ": " << s.yes << "/" << s.total
                << " (" << pct << "%)\n";
        }
    };
    auto print_delays = [&](const char* header, const std::vector<SliceDelay>& rows) {
        out << header << "\n";
        for (const auto& s : rows) {
            out << "  " << s.category << " / " << s.slice << ": n = " << s.n
                << ", median = " << s.median << ", mean = " << s.mean << "\n";
        }
    };
    print_counts("== Accepted by reputation ==", r.reputation_accepted);
    print_delays("== Delays by reputation ==", r.reputation_delays);
    print_counts("== Unanswered by reputation ==", r.reputation_unanswered);
    print_counts("== Accepted by submission time ==", r.time_accepted);
    print_delays("== Delays by submission time ==", r.time_delays);
    print_counts("== Unanswered by submission time ==", r.time_unanswered);

    if (!r.gaps.empty()) {
        out << "== Gaps ==\n";
        for (const auto& g : r.gaps) out << "  " << g << "\n";
    }
    return out.str();
}

} // namespace codeneed::analysis
