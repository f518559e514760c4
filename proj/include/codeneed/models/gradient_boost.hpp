#pragma once
// Gradient boosting with depth-1 regression trees (stumps) on logistic loss.
// Stumps are fit to the pseudo-residuals by least squares; leaf values take a
// Newton step sum(r) / sum(p(1-p)). Deterministic: no subsampling anywhere.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "codeneed/models/common.hpp"

namespace codeneed::models {

struct Stump {
    bool has_split = false;
    int feature = -1;
    double threshold = 0.0;
    double left_value = 0.0;
    double right_value = 0.0;
    double single_value = 0.0; // used when no split exists

    double value(std::span<const double> x) const {
        if (!has_split) return single_value;
        return x[static_cast<std::size_t>(feature)] <= threshold ? left_value : right_value;
    }
};

struct GbParams {
    double f0 = 0.0;
    double learning_rate = 0.1;
    std::vector<Stump> stumps;
};

namespace gb_detail {

struct StumpSplit {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

inline StumpSplit best_split(const Matrix& X, const std::vector<double>& residual) {
    const std::size_t n = X.rows;
    StumpSplit best;
    std::vector<std::pair<double, double>> vals(n); // (feature value, residual)
    for (std::size_t f = 0; f < X.cols; ++f) {
        for (std::size_t i = 0; i < n; ++i) vals[i] = {X.at(i, f), residual[i]};
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double total = 0.0, total_sq = 0.0;
        for (const auto& [v, r] : vals) {
            total += r;
            total_sq += r * r;
        }
        double left_sum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_sum += vals[i].second;
            if (vals[i].first == vals[i + 1].first) continue;
            double ln = static_cast<double>(i + 1);
            double rn = static_cast<double>(n) - ln;
            double right_sum = total - left_sum;
            // SSE decomposes so only the mean terms matter.
            double sse = total_sq - left_sum * left_sum / ln - right_sum * right_sum / rn;
            if (sse < best.sse) {
                best.found = true;
                best.feature = static_cast<int>(f);
                best.threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
                best.sse = sse;
            }
        }
    }
    return best;
}

inline double newton_value(double grad_sum, double hess_sum) {
    return hess_sum > 1e-12 ? grad_sum / hess_sum : 0.0;
}

} // namespace gb_detail

inline GbParams gb_fit(const Matrix& X, const std::vector<int>& y, int rounds = 200,
                       double learning_rate = 0.1) {
    check_training_input(X, y);
    GbParams p;
    p.learning_rate = learning_rate;

    const std::size_t n = X.rows;
    double pos = 0.0;
    for (int label : y) pos += label ? 1.0 : 0.0;
    double prior = pos / static_cast<double>(n);
    p.f0 = std::log(prior / (1.0 - prior));

    std::vector<double> f(n, p.f0);
    std::vector<double> residual(n), hess(n);
    for (int round = 0; round < rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            double prob = sigmoid(f[i]);
            residual[i] = (y[i] ? 1.0 : 0.0) - prob;
            hess[i] = prob * (1.0 - prob);
        }
        gb_detail::StumpSplit split = gb_detail::best_split(X, residual);
        Stump stump;
        if (split.found) {
            stump.has_split = true;
            stump.feature = split.feature;
            stump.threshold = split.threshold;
            double gl = 0.0, hl = 0.0, gr = 0.0, hr = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (X.at(i, static_cast<std::size_t>(split.feature)) <= split.threshold) {
                    gl += residual[i];
                    hl += hess[i];
                } else {
                    gr += residual[i];
                    hr += hess[i];
                }
            }
            stump.left_value = gb_detail::newton_value(gl, hl);
            stump.right_value = gb_detail::newton_value(gr, hr);
        } else {
            double g = 0.0, h = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                g += residual[i];
                h += hess[i];
            }
            stump.single_value = gb_detail::newton_value(g, h);
        }
        for (std::size_t i = 0; i < n; ++i) f[i] += learning_rate * stump.value(X.row(i));
        p.stumps.push_back(stump);
    }
    return p;
}

inline Prediction gb_predict(const GbParams& p, std::span<const double> x) {
    double f = p.f0;
    for (const auto& stump : p.stumps) f += p.learning_rate * stump.value(x);
    Prediction out;
    out.score = sigmoid(f);
    out.needs_code = f >= 0.0;
    return out;
}

} // namespace codeneed::models
