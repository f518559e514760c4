#pragma once
// k-nearest neighbors over the standardized training set. Euclidean distance,
// majority vote; distance ties resolve toward the lower training index, vote
// ties toward the single nearest neighbor's label (the score is nudged by
// half a vote so label == (score >= 0.5) still holds).

#include <algorithm>
#include <vector>

#include "codeneed/models/common.hpp"

namespace codeneed::models {

struct KnnParams {
    int k = 5;
    Matrix train; // standardized rows
    std::vector<int> labels;
};

inline KnnParams knn_fit(const Matrix& X_standardized, const std::vector<int>& y, int k) {
    check_training_input(X_standardized, y);
    KnnParams p;
    p.k = k;
    p.train = X_standardized;
    p.labels = y;
    return p;
}

inline Prediction knn_predict(const KnnParams& p, std::span<const double> x) {
    const std::size_t n = p.train.rows;
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(p.k), n);

    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = p.train.row(r);
        double d2 = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) {
            double d = row[c] - x[c];
            d2 += d * d;
        }
        dist[r] = {d2, r};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::size_t votes_true = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (p.labels[dist[i].second]) ++votes_true;

    Prediction out;
    if (2 * votes_true == k) {
        bool nearest = p.labels[dist[0].second] != 0;
        out.needs_code = nearest;
        out.score = (2.0 * static_cast<double>(votes_true) + (nearest ? 1.0 : -1.0)) /
                    (2.0 * static_cast<double>(k));
    } else {
        out.score = static_cast<double>(votes_true) / static_cast<double>(k);
        out.needs_code = out.score >= 0.5;
    }
    return out;
}

} // namespace codeneed::models
