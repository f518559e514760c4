#pragma once
// Gaussian naive Bayes on raw counts. Variance floor is 1e-9 times the
// largest per-feature variance of the whole training set; a feature whose
// floored variance is still zero is constant everywhere and is skipped.

#include <cmath>
#include <vector>

#include "codeneed/models/common.hpp"

namespace codeneed::models {

struct GnbParams {
    std::vector<double> mean[2]; // [no-code, needs-code]
    std::vector<double> var[2];  // floored
    double log_prior[2] = {0.0, 0.0};
};

inline GnbParams gnb_fit(const Matrix& X, const std::vector<int>& y) {
    check_training_input(X, y);
    GnbParams p;
    std::size_t n[2] = {0, 0};
    for (int cls = 0; cls < 2; ++cls) {
        p.mean[cls].assign(X.cols, 0.0);
        p.var[cls].assign(X.cols, 0.0);
    }
    for (std::size_t r = 0; r < X.rows; ++r) {
        int cls = y[r] ? 1 : 0;
        ++n[cls];
        for (std::size_t c = 0; c < X.cols; ++c) p.mean[cls][c] += X.at(r, c);
    }
    for (int cls = 0; cls < 2; ++cls)
        for (double& m : p.mean[cls]) m /= static_cast<double>(n[cls]);
    for (std::size_t r = 0; r < X.rows; ++r) {
        int cls = y[r] ? 1 : 0;
        for (std::size_t c = 0; c < X.cols; ++c) {
            double d = X.at(r, c) - p.mean[cls][c];
            p.var[cls][c] += d * d;
        }
    }
    for (int cls = 0; cls < 2; ++cls)
        for (double& v : p.var[cls]) v /= static_cast<double>(n[cls]);

    // Overall per-feature variance for the floor.
    Standardizer overall = Standardizer::fit(X);
    double max_var = 0.0;
    for (double s : overall.stddev) max_var = std::max(max_var, s * s);
    double eps = 1e-9 * max_var;
    for (int cls = 0; cls < 2; ++cls)
        for (double& v : p.var[cls]) v += eps;

    for (int cls = 0; cls < 2; ++cls)
        p.log_prior[cls] = std::log(static_cast<double>(n[cls]) / static_cast<double>(X.rows));
    return p;
}

inline double gnb_log_likelihood(const GnbParams& p, int cls, std::span<const double> x) {
    double ll = p.log_prior[cls];
    for (std::size_t c = 0; c < x.size(); ++c) {
        double v = p.var[cls][c];
        if (v <= 0.0) continue; // constant feature, identical in both classes
        double d = x[c] - p.mean[cls][c];
        ll += -0.5 * std::log(2.0 * M_PI * v) - d * d / (2.0 * v);
    }
    return ll;
}

inline Prediction gnb_predict(const GnbParams& p, std::span<const double> x) {
    double l0 = gnb_log_likelihood(p, 0, x);
    double l1 = gnb_log_likelihood(p, 1, x);
    double m = std::max(l0, l1);
    double e0 = std::exp(l0 - m);
    double e1 = std::exp(l1 - m);
    Prediction out;
    out.score = e1 / (e0 + e1);
    out.needs_code = out.score >= 0.5;
    return out;
}

} // namespace codeneed::models
