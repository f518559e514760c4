#pragma once
// Linear SVM: hinge loss + L2 regularization, stochastic subgradient descent
// with step 1/(lambda * t), data reshuffled from the seed each epoch. The
// bias term is unregularized and only moves on margin violations.

#include <functional>
#include <numeric>
#include <vector>

#include "codeneed/models/common.hpp"

namespace codeneed::models {

struct LsvmParams {
    std::vector<double> w;
    double bias = 0.0;
    double lambda = 1e-4;
    int epochs = 100;
};

// Optional per-epoch observer for convergence checks.
using LsvmObserver = std::function<void(int epoch, const std::vector<double>& w, double bias)>;

inline double lsvm_objective(const std::vector<double>& w, double bias, const Matrix& X,
                             const std::vector<int>& y, double lambda) {
    double norm2 = 0.0;
    for (double v : w) norm2 += v * v;
    double hinge = 0.0;
    for (std::size_t r = 0; r < X.rows; ++r) {
        auto row = X.row(r);
        double margin = bias;
        for (std::size_t c = 0; c < row.size(); ++c) margin += w[c] * row[c];
        double yr = y[r] ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - yr * margin);
    }
    return lambda / 2.0 * norm2 + hinge / static_cast<double>(X.rows);
}

inline LsvmParams lsvm_fit(const Matrix& X_standardized, const std::vector<int>& y,
                           std::uint64_t seed, double lambda = 1e-4, int epochs = 100,
                           const LsvmObserver& observer = nullptr) {
    check_training_input(X_standardized, y);
    LsvmParams p;
    p.lambda = lambda;
    p.epochs = epochs;
    p.w.assign(X_standardized.cols, 0.0);

    Rng rng(seed);
    std::vector<std::size_t> order(X_standardized.rows);
    std::iota(order.begin(), order.end(), 0);

    long long t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            ++t;
            double eta = 1.0 / (lambda * static_cast<double>(t));
            auto row = X_standardized.row(idx);
            double margin = p.bias;
            for (std::size_t c = 0; c < row.size(); ++c) margin += p.w[c] * row[c];
            double yr = y[idx] ? 1.0 : -1.0;
            bool violated = yr * margin < 1.0;
            double shrink = 1.0 - eta * lambda;
            if (shrink < 0.0) shrink = 0.0;
            for (std::size_t c = 0; c < row.size(); ++c) {
                p.w[c] *= shrink;
                if (violated) p.w[c] += eta * yr * row[c];
            }
            if (violated) p.bias += eta * yr;
        }
        if (observer) observer(epoch, p.w, p.bias);
    }
    return p;
}

inline Prediction lsvm_predict(const LsvmParams& p, std::span<const double> x) {
    double margin = p.bias;
    for (std::size_t c = 0; c < x.size(); ++c) margin += p.w[c] * x[c];
    Prediction out;
    out.score = sigmoid(margin);
    out.needs_code = margin >= 0.0;
    return out;
}

} // namespace codeneed::models
