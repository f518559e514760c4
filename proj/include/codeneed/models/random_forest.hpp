#pragma once
// Random forest on raw counts: bootstrap per tree, sqrt(features) candidates
// per split, trees grown to purity, majority vote. Tree seeds derive from
// seed + tree index, so aggregation is order-independent.

#include <cmath>
#include <vector>

#include "codeneed/models/common.hpp"
#include "codeneed/models/decision_tree.hpp"

namespace codeneed::models {

struct ForestParams {
    std::vector<DecisionTree> trees;
    std::size_t mtry = 0;
    bool bootstrap = true;
};

inline ForestParams forest_fit(const Matrix& X, const std::vector<int>& y, std::uint64_t seed,
                               int num_trees = 100, std::size_t mtry = 0, bool bootstrap = true) {
    check_training_input(X, y);
    ForestParams p;
    p.bootstrap = bootstrap;
    p.mtry = mtry == 0
                 ? std::max<std::size_t>(
                       1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(X.cols)))))
                 : mtry;
    p.trees.reserve(static_cast<std::size_t>(num_trees));
    for (int t = 0; t < num_trees; ++t) {
        Rng rng(seed + static_cast<std::uint64_t>(t));
        std::vector<std::size_t> idx;
        idx.reserve(X.rows);
        if (bootstrap) {
            for (std::size_t i = 0; i < X.rows; ++i) idx.push_back(rng.index(X.rows));
        } else {
            for (std::size_t i = 0; i < X.rows; ++i) idx.push_back(i);
        }
        p.trees.push_back(grow_tree(X, y, std::move(idx), p.mtry, rng));
    }
    return p;
}

inline Prediction forest_predict(const ForestParams& p, std::span<const double> x) {
    std::size_t votes = 0;
    for (const auto& tree : p.trees) votes += tree.predict(x) ? 1 : 0;
    Prediction out;
    out.score = static_cast<double>(votes) / static_cast<double>(p.trees.size());
    out.needs_code = out.score >= 0.5;
    return out;
}

} // namespace codeneed::models
