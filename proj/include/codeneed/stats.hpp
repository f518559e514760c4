#pragma once
// Nonparametric statistics toolbox: Pearson chi-squared independence test,
// two-sided Mann-Whitney-Wilcoxon (exact permutation path for small products,
// tie- and continuity-corrected normal approximation otherwise), Cliff's
// delta with conventional magnitude bands, and unweighted Cohen's kappa.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeneed/errors.hpp"

namespace codeneed::stats {

enum class Magnitude { negligible, small, medium, large };

inline std::string_view magnitude_name(Magnitude m) {
    switch (m) {
        case Magnitude::negligible: return "negligible";
        case Magnitude::small: return "small";
        case Magnitude::medium: return "medium";
        case Magnitude::large: return "large";
    }
    return "negligible";
}

// Conventional bands: |d| < 0.147 negligible, < 0.33 small, < 0.474 medium.
inline Magnitude magnitude_for(double delta) {
    double a = std::fabs(delta);
    if (a < 0.147) return Magnitude::negligible;
    if (a < 0.33) return Magnitude::small;
    if (a < 0.474) return Magnitude::medium;
    return Magnitude::large;
}

struct TestResult {
    double statistic = 0.0;
    std::optional<double> p_value;
    std::optional<double> effect_size;
    std::optional<Magnitude> magnitude;
    double dof = 0.0; // chi-squared only
};

namespace detail {

inline double ln_gamma(double x) {
    // Lanczos approximation, g = 7.
    static const double coeffs[9] = {
        0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(M_PI / std::sin(M_PI * x)) - ln_gamma(1.0 - x);
    }
    x -= 1.0;
    double a = coeffs[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += coeffs[i] / (x + static_cast<double>(i));
    return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

// Regularized lower incomplete gamma P(a, x) by series expansion (x < a + 1).
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by continued fraction (x >= a + 1).
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
}

inline double regularized_gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace detail

/// Survival function of the chi-squared distribution with k dof.
inline double chi_squared_sf(double x, double dof) {
    return detail::regularized_gamma_q(dof / 2.0, x / 2.0);
}

struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> counts; // rows x cols, non-negative
};

/// Pearson chi-squared test of independence, no continuity correction.
inline TestResult chi_squared(const ContingencyTable& t) {
    const std::size_t rows = t.counts.size();
    if (rows < 2) throw StatsError("chi-squared needs at least 2 rows");
    const std::size_t cols = t.counts[0].size();
    if (cols < 2) throw StatsError("chi-squared needs at least 2 columns");
    for (const auto& row : t.counts)
        if (row.size() != cols) throw StatsError("ragged contingency table");

    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            double v = t.counts[i][j];
            if (v < 0) throw StatsError("negative count in contingency table");
            row_sum[i] += v;
            col_sum[j] += v;
            total += v;
        }
    }
    for (double s : row_sum)
        if (s == 0.0) throw StatsError("zero row marginal in contingency table");
    for (double s : col_sum)
        if (s == 0.0) throw StatsError("zero column marginal in contingency table");

    double statistic = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            double expected = row_sum[i] * col_sum[j] / total;
            double diff = t.counts[i][j] - expected;
            statistic += diff * diff / expected;
        }
    }
    TestResult result;
    result.statistic = statistic;
    result.dof = static_cast<double>((rows - 1) * (cols - 1));
    result.p_value = std::clamp(chi_squared_sf(statistic, result.dof), 0.0, 1.0);
    return result;
}

namespace detail {

struct RankInfo {
    std::vector<double> ranks_a;
    double tie_term = 0.0; // sum of t^3 - t over tie groups
};

inline RankInfo midranks(std::span<const double> a, std::span<const double> b) {
    struct Entry {
        double value;
        bool from_a;
    };
    std::vector<Entry> pooled;
    pooled.reserve(a.size() + b.size());
    for (double v : a) pooled.push_back({v, true});
    for (double v : b) pooled.push_back({v, false});
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const Entry& x, const Entry& y) { return x.value < y.value; });

    RankInfo info;
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
        double rank = 0.5 * static_cast<double>(i + 1 + j); // average of ranks i+1..j
        double t = static_cast<double>(j - i);
        if (t > 1) info.tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k)
            if (pooled[k].from_a) info.ranks_a.push_back(rank);
        i = j;
    }
    return info;
}

// Exact two-sided p over the permutation distribution of the rank sum of the
// smaller group (doubled ranks keep everything integral, ties included).
inline double mann_whitney_exact_p(std::span<const double> a, std::span<const double> b) {
    const bool a_small = a.size() <= b.size();
    std::span<const double> small_group = a_small ? a : b;
    std::span<const double> other = a_small ? b : a;

    struct Entry {
        double value;
        bool from_small;
    };
    std::vector<Entry> pooled;
    for (double v : small_group) pooled.push_back({v, true});
    for (double v : other) pooled.push_back({v, false});
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const Entry& x, const Entry& y) { return x.value < y.value; });

    const std::size_t n = pooled.size();
    const std::size_t g = small_group.size();
    std::vector<long long> doubled_rank(n, 0);
    long long observed_s2 = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && pooled[j].value == pooled[i].value) ++j;
            long long dr = static_cast<long long>(i + 1 + j); // 2 * midrank
            for (std::size_t k = i; k < j; ++k) {
                doubled_rank[k] = dr;
                if (pooled[k].from_small) observed_s2 += dr;
            }
            i = j;
        }
    }

    long long max_s2 = 0;
    for (long long dr : doubled_rank) max_s2 = std::max(max_s2, dr);
    max_s2 *= static_cast<long long>(g);

    // dp[k][s] = number of size-k subsets with doubled rank sum s.
    std::vector<std::vector<double>> dp(
        g + 1, std::vector<double>(static_cast<std::size_t>(max_s2) + 1, 0.0));
    dp[0][0] = 1.0;
    for (std::size_t item = 0; item < n; ++item) {
        long long dr = doubled_rank[item];
        std::size_t kmax = std::min(g, item + 1);
        for (std::size_t k = kmax; k >= 1; --k) {
            auto& dst = dp[k];
            const auto& src = dp[k - 1];
            for (long long s = max_s2; s >= dr; --s) {
                double add = src[static_cast<std::size_t>(s - dr)];
                if (add != 0.0) dst[static_cast<std::size_t>(s)] += add;
            }
        }
    }

    double total = 0.0, le = 0.0, ge = 0.0;
    for (long long s = 0; s <= max_s2; ++s) {
        double c = dp[g][static_cast<std::size_t>(s)];
        if (c == 0.0) continue;
        total += c;
        if (s <= observed_s2) le += c;
        if (s >= observed_s2) ge += c;
    }
    double p = 2.0 * std::min(le, ge) / total;
    return std::min(1.0, p);
}

} // namespace detail

/// Two-sided Mann-Whitney-Wilcoxon. Statistic is U = min(U_a, U_b).
/// Exact permutation p when |a|*|b| <= 400, normal approximation with tie and
/// continuity corrections otherwise.
inline TestResult mann_whitney(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw StatsError("mann_whitney needs non-empty samples");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    detail::RankInfo info = detail::midranks(a, b);
    double rank_sum_a = 0.0;
    for (double r : info.ranks_a) rank_sum_a += r;
    double u_a = rank_sum_a - na * (na + 1.0) / 2.0;
    double u_b = na * nb - u_a;

    TestResult result;
    result.statistic = std::min(u_a, u_b);

    if (a.size() * b.size() <= 400) {
        result.p_value = detail::mann_whitney_exact_p(a, b);
        return result;
    }

    double n = na + nb;
    double mean = na * nb / 2.0;
    double var = na * nb / 12.0 * ((n + 1.0) - info.tie_term / (n * (n - 1.0)));
    if (var <= 0.0) {
        result.p_value = 1.0;
        return result;
    }
    double z = (std::fabs(u_a - mean) - 0.5) / std::sqrt(var);
    if (z < 0.0) z = 0.0;
    result.p_value = std::clamp(2.0 * detail::normal_sf(z), 0.0, 1.0);
    return result;
}

/// delta = (#{a_i > b_j} - #{a_i < b_j}) / (|a| * |b|), with magnitude bands.
inline TestResult cliffs_delta(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw StatsError("cliffs_delta needs non-empty samples");
    long long more = 0, less = 0;
    for (double x : a) {
        for (double y : b) {
            if (x > y) ++more;
            else if (x < y) ++less;
        }
    }
    double delta = static_cast<double>(more - less) /
                   (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    TestResult result;
    result.statistic = delta;
    result.effect_size = delta;
    result.magnitude = magnitude_for(delta);
    return result;
}

/// Unweighted Cohen's kappa over two equal-length categorical label lists.
template <typename Label>
inline TestResult cohens_kappa(const std::vector<Label>& labels_a,
                               const std::vector<Label>& labels_b) {
    if (labels_a.size() != labels_b.size())
        throw StatsError("cohens_kappa needs equal-length label lists");
    if (labels_a.empty()) throw StatsError("cohens_kappa needs non-empty label lists");

    const double n = static_cast<double>(labels_a.size());
    std::map<Label, double> freq_a, freq_b;
    double agree = 0.0;
    for (std::size_t i = 0; i < labels_a.size(); ++i) {
        freq_a[labels_a[i]] += 1.0;
        freq_b[labels_b[i]] += 1.0;
        if (labels_a[i] == labels_b[i]) agree += 1.0;
    }
    double p_o = agree / n;
    double p_e = 0.0;
    for (const auto& [label, ca] : freq_a) {
        auto it = freq_b.find(label);
        if (it != freq_b.end()) p_e += (ca / n) * (it->second / n);
    }
    TestResult result;
    if (1.0 - p_e < 1e-15) {
        result.statistic = 1.0; // both raters constant on the same label
    } else {
        result.statistic = (p_o - p_e) / (1.0 - p_e);
    }
    return result;
}

} // namespace codeneed::stats
