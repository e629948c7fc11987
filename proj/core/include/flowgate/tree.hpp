#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flowgate/matrix.hpp"

namespace flowgate {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // rows with x[feature] <= threshold go left
    int left = -1;
    int right = -1;
    double value = 0.0;   // leaf output: attack probability, or raw leaf weight for boosting
    double cover = 0.0;   // total sample weight reaching the node
    double gain = 0.0;    // weighted impurity (or loss) decrease credited to the split

    bool is_leaf() const noexcept { return feature < 0; }

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(std::span<const double> row) const;
    std::size_t leaf_index(std::span<const double> row) const;
    std::size_t depth() const;
    bool well_formed() const;

    friend bool operator==(const Tree&, const Tree&) = default;
};

struct SplitDecision {
    std::size_t feature_index = 0;
    double threshold = 0.0;
    double impurity_decrease = 0.0;
};

// Weighted-Gini CART split search. Thresholds sit at midpoints of adjacent
// distinct sorted values; ties prefer the lower feature, then the lower
// threshold. Returns nullopt when no split lowers impurity.
std::optional<SplitDecision> find_best_split(const Matrix& features, std::span<const int> labels,
                                             std::span<const double> weights,
                                             std::span<const std::size_t> candidate_features);

// Same search restricted to `rows`, each child keeping at least `min_leaf` rows.
std::optional<SplitDecision> find_best_split(const Matrix& features, std::span<const int> labels,
                                             std::span<const double> weights,
                                             std::span<const std::size_t> rows,
                                             std::span<const std::size_t> candidate_features,
                                             std::size_t min_leaf);

struct CartOptions {
    int max_depth = 16;
    int min_leaf = 2;
    std::optional<std::size_t> features_per_split;  // nullopt = every feature at every node
    std::uint64_t seed = 0;
};

// Grows a classification tree on rows with positive weight. Leaf values are
// weighted attack fractions.
Tree grow_cart(const Matrix& features, std::span<const int> labels, std::span<const double> weights,
               const CartOptions& options);

}  // namespace flowgate
