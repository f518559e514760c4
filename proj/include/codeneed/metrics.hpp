#pragma once
// Per-class precision/recall/F1 plus overall accuracy, all derived from the
// 2x2 confusion matrix with needs-code as the positive class.

#include <cstdint>
#include <vector>

#include "codeneed/errors.hpp"

namespace codeneed::metrics {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false; // zero denominator reported as 0
    bool recall_undefined = false;
};

struct MetricsReport {
    // Confusion counts, needs-code positive.
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    ClassMetrics needs_code;
    ClassMetrics no_code;
    double accuracy = 0.0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

namespace detail {

inline ClassMetrics from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
    ClassMetrics m;
    if (tp + fp == 0) {
        m.precision_undefined = true;
    } else {
        m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    if (tp + fn == 0) {
        m.recall_undefined = true;
    } else {
        m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    m.f1 = (m.precision + m.recall == 0.0)
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

} // namespace detail

inline MetricsReport classification_metrics(const std::vector<int>& y_true,
                                            const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw StatsError("classification_metrics: length mismatch");
    if (y_true.empty()) throw StatsError("classification_metrics: empty input");

    MetricsReport report;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        bool truth = y_true[i] != 0;
        bool pred = y_pred[i] != 0;
        if (truth && pred) ++report.tp;
        else if (!truth && pred) ++report.fp;
        else if (truth && !pred) ++report.fn;
        else ++report.tn;
    }
    report.needs_code = detail::from_counts(report.tp, report.fp, report.fn);
    // The no-code class swaps the roles: its true positives are the tn cell.
    report.no_code = detail::from_counts(report.tn, report.fn, report.fp);
    report.accuracy = static_cast<double>(report.tp + report.tn) /
                      static_cast<double>(report.total());
    return report;
}

} // namespace codeneed::metrics
