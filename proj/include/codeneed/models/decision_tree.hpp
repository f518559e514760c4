#pragma once
// CART-style binary classification tree with Gini impurity, used by the
// random forest. Candidate thresholds are midpoints between consecutive
// distinct feature values; split ties resolve to the lowest feature index,
// then the lowest threshold. Nodes grow until pure or smaller than 2 samples.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "codeneed/models/common.hpp"

namespace codeneed::models {

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int label = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    int predict(std::span<const double> x) const {
        std::int32_t idx = 0;
        while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
            const TreeNode& n = nodes[static_cast<std::size_t>(idx)];
            idx = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(idx)].label;
    }
};

namespace tree_detail {

struct Split {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gini = std::numeric_limits<double>::infinity();
};

inline double gini_of(double pos, double total) {
    if (total == 0.0) return 0.0;
    double p = pos / total;
    return 2.0 * p * (1.0 - p);
}

// Weighted Gini of the best threshold on one feature, via a sorted sweep.
inline void consider_feature(const Matrix& X, const std::vector<int>& y,
                             const std::vector<std::size_t>& idx, int feature, Split& best) {
    const std::size_t n = idx.size();
    std::vector<std::pair<double, int>> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        vals[i] = {X.at(idx[i], static_cast<std::size_t>(feature)), y[idx[i]]};
    }
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double total_pos = 0.0;
    for (const auto& [v, label] : vals) total_pos += label ? 1.0 : 0.0;

    double left_n = 0.0, left_pos = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        left_n += 1.0;
        left_pos += vals[i].second ? 1.0 : 0.0;
        if (vals[i].first == vals[i + 1].first) continue;
        double right_n = static_cast<double>(n) - left_n;
        double right_pos = total_pos - left_pos;
        double gini = (left_n * gini_of(left_pos, left_n) +
                       right_n * gini_of(right_pos, right_n)) /
                      static_cast<double>(n);
        double threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
        if (gini < best.gini) {
            best = {true, feature, threshold, gini};
        }
        // Equal gini keeps the earlier candidate: features are visited in
        // ascending index order and thresholds in ascending value order.
    }
}

inline int majority_label(const std::vector<int>& y, const std::vector<std::size_t>& idx) {
    std::size_t pos = 0;
    for (std::size_t i : idx) pos += y[i] ? 1 : 0;
    if (2 * pos == idx.size()) return 0; // tie
    return 2 * pos > idx.size() ? 1 : 0;
}

inline std::int32_t grow(DecisionTree& tree, const Matrix& X, const std::vector<int>& y,
                         std::vector<std::size_t>& idx, std::size_t mtry, Rng& rng) {
    bool pure = true;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        if (y[idx[i]] != y[idx[0]]) {
            pure = false;
            break;
        }
    }
    if (pure || idx.size() < 2) {
        TreeNode leaf;
        leaf.label = idx.empty() ? 0 : majority_label(y, idx);
        tree.nodes.push_back(leaf);
        return static_cast<std::int32_t>(tree.nodes.size() - 1);
    }

    // Draw the candidate feature subset, then evaluate in ascending index
    // order so ties are reproducible regardless of draw order.
    std::vector<int> features(X.cols);
    for (std::size_t c = 0; c < X.cols; ++c) features[c] = static_cast<int>(c);
    std::size_t m = std::min(mtry, X.cols);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = i + rng.index(X.cols - i);
        std::swap(features[i], features[j]);
    }
    features.resize(m);
    std::sort(features.begin(), features.end());

    Split best;
    for (int f : features) consider_feature(X, y, idx, f, best);

    if (!best.found) { // all candidate features constant within the node
        TreeNode leaf;
        leaf.label = majority_label(y, idx);
        tree.nodes.push_back(leaf);
        return static_cast<std::int32_t>(tree.nodes.size() - 1);
    }

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
        if (X.at(i, static_cast<std::size_t>(best.feature)) <= best.threshold) {
            left_idx.push_back(i);
        } else {
            right_idx.push_back(i);
        }
    }
    idx.clear();
    idx.shrink_to_fit();

    TreeNode node;
    node.feature = best.feature;
    node.threshold = best.threshold;
    tree.nodes.push_back(node);
    auto self = static_cast<std::int32_t>(tree.nodes.size() - 1);
    std::int32_t left = grow(tree, X, y, left_idx, mtry, rng);
    std::int32_t right = grow(tree, X, y, right_idx, mtry, rng);
    tree.nodes[static_cast<std::size_t>(self)].left = left;
    tree.nodes[static_cast<std::size_t>(self)].right = right;
    return self;
}

} // namespace tree_detail

/// Grows one CART tree over the given sample indices.
inline DecisionTree grow_tree(const Matrix& X, const std::vector<int>& y,
                              std::vector<std::size_t> idx, std::size_t mtry, Rng& rng) {
    DecisionTree tree;
    tree_detail::grow(tree, X, y, idx, mtry, rng);
    return tree;
}

} // namespace codeneed::models
