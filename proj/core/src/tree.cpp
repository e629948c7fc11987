#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "flowgate/tree.hpp"

namespace flowgate {
namespace {

// Smallest impurity decrease treated as real; smaller values are rounding noise.
constexpr double kMinDecrease = 1e-12;

double gini(double w0, double w1) {
    const double w = w0 + w1;
    if (w <= 0.0) return 0.0;
    const double p0 = w0 / w;
    const double p1 = w1 / w;
    return 1.0 - p0 * p0 - p1 * p1;
}

double split_point(double lo, double hi) {
    const double mid = std::midpoint(lo, hi);
    // Adjacent doubles can round the midpoint up onto `hi`.
    return mid < hi ? mid : lo;
}

}  // namespace

double Tree::predict(std::span<const double> row) const { return nodes[leaf_index(row)].value; }

std::size_t Tree::leaf_index(std::span<const double> row) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return i;
}

std::size_t Tree::depth() const {
    if (nodes.empty()) return 0;
    std::function<std::size_t(std::size_t)> walk = [&](std::size_t i) -> std::size_t {
        const auto& n = nodes[i];
        if (n.is_leaf()) return 0;
        return 1 + std::max(walk(static_cast<std::size_t>(n.left)), walk(static_cast<std::size_t>(n.right)));
    };
    return walk(0);
}

bool Tree::well_formed() const {
    if (nodes.empty()) return false;
    std::vector<int> seen(nodes.size(), 0);
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (++seen[i] > 1) return false;
        const auto& n = nodes[i];
        if (n.is_leaf()) {
            if (n.left != -1 || n.right != -1) return false;
            continue;
        }
        const auto size = static_cast<int>(nodes.size());
        if (n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i) || n.left >= size || n.right >= size ||
            n.left == n.right) {
            return false;
        }
        stack.push_back(static_cast<std::size_t>(n.left));
        stack.push_back(static_cast<std::size_t>(n.right));
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

std::optional<SplitDecision> find_best_split(const Matrix& features, std::span<const int> labels,
                                             std::span<const double> weights,
                                             std::span<const std::size_t> rows,
                                             std::span<const std::size_t> candidate_features,
                                             std::size_t min_leaf) {
    min_leaf = std::max<std::size_t>(min_leaf, 1);
    if (rows.size() < 2 * min_leaf) return std::nullopt;

    double total0 = 0.0;
    double total1 = 0.0;
    for (std::size_t r : rows) (labels[r] == 1 ? total1 : total0) += weights[r];
    const double total = total0 + total1;
    if (total <= 0.0) return std::nullopt;
    const double parent = gini(total0, total1);
    if (parent <= 0.0) return std::nullopt;

    std::vector<std::size_t> candidates(candidate_features.begin(), candidate_features.end());
    std::sort(candidates.begin(), candidates.end());

    std::optional<SplitDecision> best;
    std::vector<std::pair<double, std::size_t>> order(rows.size());
    for (std::size_t f : candidates) {
        for (std::size_t i = 0; i < rows.size(); ++i) order[i] = {features(rows[i], f), rows[i]};
        std::sort(order.begin(), order.end());
        if (order.front().first == order.back().first) continue;

        double left0 = 0.0;
        double left1 = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const std::size_t r = order[i].second;
            (labels[r] == 1 ? left1 : left0) += weights[r];
            if (order[i].first == order[i + 1].first) continue;
            const std::size_t n_left = i + 1;
            if (n_left < min_leaf || order.size() - n_left < min_leaf) continue;
            const double left = left0 + left1;
            const double right = total - left;
            if (left <= 0.0 || right <= 0.0) continue;
            const double decrease = parent - (left / total) * gini(left0, left1) -
                                    (right / total) * gini(total0 - left0, total1 - left1);
            if (decrease <= kMinDecrease) continue;
            if (!best || decrease > best->impurity_decrease + kMinDecrease) {
                best = SplitDecision{f, split_point(order[i].first, order[i + 1].first), decrease};
            }
        }
    }
    return best;
}

std::optional<SplitDecision> find_best_split(const Matrix& features, std::span<const int> labels,
                                             std::span<const double> weights,
                                             std::span<const std::size_t> candidate_features) {
    if (labels.size() != features.rows() || weights.size() != features.rows()) {
        throw std::invalid_argument("find_best_split: labels/weights must match feature rows");
    }
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("find_best_split: weights must be non-negative");
    }
    std::vector<std::size_t> rows(features.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return find_best_split(features, labels, weights, rows, candidate_features, 1);
}

Tree grow_cart(const Matrix& features, std::span<const int> labels, std::span<const double> weights,
               const CartOptions& options) {
    if (options.max_depth < 1 || options.min_leaf < 1) {
        throw std::invalid_argument("grow_cart: max_depth and min_leaf must be positive");
    }
    std::vector<std::size_t> rows;
    double root_weight = 0.0;
    for (std::size_t r = 0; r < features.rows(); ++r) {
        if (weights[r] > 0.0) {
            rows.push_back(r);
            root_weight += weights[r];
        }
    }
    if (rows.empty()) throw std::invalid_argument("grow_cart: no rows with positive weight");

    const std::size_t nfeat = features.cols();
    std::vector<std::size_t> all_features(nfeat);
    std::iota(all_features.begin(), all_features.end(), std::size_t{0});
    const std::size_t per_split =
        std::clamp<std::size_t>(options.features_per_split.value_or(nfeat), 1, std::max<std::size_t>(nfeat, 1));
    std::mt19937_64 rng(options.seed);

    Tree tree;
    const auto min_leaf = static_cast<std::size_t>(options.min_leaf);

    std::function<int(std::vector<std::size_t>&, int)> build = [&](std::vector<std::size_t>& node_rows,
                                                                   int depth) -> int {
        double w0 = 0.0;
        double w1 = 0.0;
        for (std::size_t r : node_rows) (labels[r] == 1 ? w1 : w0) += weights[r];
        const int index = static_cast<int>(tree.nodes.size());
        TreeNode node;
        node.cover = w0 + w1;
        node.value = w1 / (w0 + w1);
        tree.nodes.push_back(node);

        if (depth >= options.max_depth || node_rows.size() < 2 * min_leaf || w0 == 0.0 || w1 == 0.0) {
            return index;
        }
        std::vector<std::size_t> candidates = all_features;
        if (per_split < nfeat) {
            // Partial Fisher-Yates: the first per_split entries form the sample.
            for (std::size_t i = 0; i < per_split; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, nfeat - 1);
                std::swap(candidates[i], candidates[pick(rng)]);
            }
            candidates.resize(per_split);
        }
        const auto split = find_best_split(features, labels, weights, node_rows, candidates, min_leaf);
        if (!split) return index;

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (std::size_t r : node_rows) {
            (features(r, split->feature_index) <= split->threshold ? left_rows : right_rows).push_back(r);
        }
        node_rows.clear();
        node_rows.shrink_to_fit();

        tree.nodes[index].feature = static_cast<int>(split->feature_index);
        tree.nodes[index].threshold = split->threshold;
        tree.nodes[index].gain = split->impurity_decrease * tree.nodes[index].cover / root_weight;
        const int left = build(left_rows, depth + 1);
        const int right = build(right_rows, depth + 1);
        tree.nodes[index].left = left;
        tree.nodes[index].right = right;
        return index;
    };
    build(rows, 0);
    return tree;
}

}  // namespace flowgate
