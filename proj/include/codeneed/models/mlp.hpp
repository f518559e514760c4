#pragma once
// One-hidden-layer perceptron: rectified hidden units, logistic output,
// mean cross-entropy, full-batch gradient descent. Parameters live in one
// flat vector (W1 row-major, b1, w2, b2) so gradients can be checked against
// finite differences coordinate by coordinate.

#include <cmath>
#include <vector>

#include "codeneed/models/common.hpp"

namespace codeneed::models {

struct MlpParams {
    int hidden = 64;
    std::size_t input_dim = 0;
    std::vector<double> params; // [W1 (hidden x d), b1 (hidden), w2 (hidden), b2 (1)]

    std::size_t size() const {
        auto h = static_cast<std::size_t>(hidden);
        return h * input_dim + h + h + 1;
    }
};

namespace mlp_detail {

struct Views {
    const double* w1;
    const double* b1;
    const double* w2;
    const double* b2;
};

inline Views views(const std::vector<double>& params, std::size_t d, std::size_t h) {
    Views v;
    v.w1 = params.data();
    v.b1 = params.data() + h * d;
    v.w2 = params.data() + h * d + h;
    v.b2 = params.data() + h * d + h + h;
    return v;
}

inline double forward_one(const Views& v, std::span<const double> x, std::size_t d, std::size_t h,
                          std::vector<double>* hidden_out) {
    double z = *v.b2;
    for (std::size_t j = 0; j < h; ++j) {
        double a = v.b1[j];
        const double* wrow = v.w1 + j * d;
        for (std::size_t c = 0; c < d; ++c) a += wrow[c] * x[c];
        double activated = a > 0.0 ? a : 0.0;
        if (hidden_out) (*hidden_out)[j] = activated;
        z += v.w2[j] * activated;
    }
    return z;
}

} // namespace mlp_detail

/// Mean cross-entropy loss and its gradient at `params` (flat layout).
inline double mlp_loss_and_gradient(const std::vector<double>& params, const Matrix& X,
                                    const std::vector<int>& y, std::size_t hidden,
                                    std::vector<double>* grad_out) {
    const std::size_t d = X.cols;
    const std::size_t h = hidden;
    const std::size_t n = X.rows;
    auto v = mlp_detail::views(params, d, h);

    if (grad_out) grad_out->assign(params.size(), 0.0);
    std::vector<double> hidden_act(h);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto x = X.row(i);
        double z = mlp_detail::forward_one(v, x, d, h, &hidden_act);
        double p = sigmoid(z);
        double target = y[i] ? 1.0 : 0.0;
        double pc = std::min(1.0 - 1e-12, std::max(1e-12, p));
        loss += -(target * std::log(pc) + (1.0 - target) * std::log(1.0 - pc));
        if (!grad_out) continue;

        double dz = (p - target) / static_cast<double>(n);
        double* g = grad_out->data();
        double* gw1 = g;
        double* gb1 = g + h * d;
        double* gw2 = g + h * d + h;
        double* gb2 = g + h * d + h + h;
        *gb2 += dz;
        for (std::size_t j = 0; j < h; ++j) {
            gw2[j] += dz * hidden_act[j];
            if (hidden_act[j] > 0.0) {
                double da = dz * v.w2[j];
                gb1[j] += da;
                double* grow = gw1 + j * d;
                for (std::size_t c = 0; c < d; ++c) grow[c] += da * x[c];
            }
        }
    }
    return loss / static_cast<double>(n);
}

inline MlpParams mlp_fit(const Matrix& X_standardized, const std::vector<int>& y,
                         std::uint64_t seed, int hidden = 64, double learning_rate = 0.01,
                         int epochs = 300) {
    check_training_input(X_standardized, y);
    MlpParams p;
    p.hidden = hidden;
    p.input_dim = X_standardized.cols;
    p.params.assign(p.size(), 0.0);

    const auto d = X_standardized.cols;
    const auto h = static_cast<std::size_t>(hidden);
    Rng rng(seed);
    double scale1 = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < h * d; ++i) p.params[i] = rng.uniform(-0.5, 0.5) * scale1;
    double scale2 = 1.0 / std::sqrt(static_cast<double>(h));
    for (std::size_t i = 0; i < h; ++i)
        p.params[h * d + h + i] = rng.uniform(-0.5, 0.5) * scale2;
    // Biases start at zero.

    std::vector<double> grad;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        mlp_loss_and_gradient(p.params, X_standardized, y, h, &grad);
        for (std::size_t i = 0; i < p.params.size(); ++i)
            p.params[i] -= learning_rate * grad[i];
    }
    return p;
}

inline Prediction mlp_predict(const MlpParams& p, std::span<const double> x) {
    auto v = mlp_detail::views(p.params, p.input_dim, static_cast<std::size_t>(p.hidden));
    double z = mlp_detail::forward_one(v, x, p.input_dim, static_cast<std::size_t>(p.hidden),
                                       nullptr);
    Prediction out;
    out.score = sigmoid(z);
    out.needs_code = z >= 0.0;
    return out;
}

} // namespace codeneed::models
