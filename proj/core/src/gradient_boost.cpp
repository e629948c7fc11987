#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "flowgate/learners.hpp"

namespace flowgate::detail {
namespace {

constexpr double kMinGain = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct NodeSums {
    double g = 0.0;
    double h = 0.0;
};

struct Candidate {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

struct Accumulator {
    double g = 0.0;
    double h = 0.0;
    double last = 0.0;
    bool started = false;
};

double score(double g, double h, double lambda) {
    const double denom = h + lambda;
    return denom > 0.0 ? g * g / denom : 0.0;
}

// One regression tree on (gradient, hessian) pairs, grown level by level with
// exact greedy splits over presorted columns. Leaf values are Newton steps
// -G / (H + lambda); node gain is the second-order loss reduction.
Tree grow_newton_tree(const Matrix& x, const std::vector<std::vector<std::uint32_t>>& sorted,
                      const std::vector<double>& grad, const std::vector<double>& hess, int max_depth, double lambda,
                      std::vector<int>& node_of) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    Tree tree;
    tree.nodes.emplace_back();
    std::fill(node_of.begin(), node_of.end(), 0);

    std::vector<NodeSums> sums(1);
    for (std::size_t i = 0; i < n; ++i) {
        sums[0].g += grad[i];
        sums[0].h += hess[i];
    }
    std::vector<int> frontier{0};

    for (int depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
        std::vector<int> slot(tree.nodes.size(), -1);
        for (std::size_t s = 0; s < frontier.size(); ++s) slot[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
        std::vector<Candidate> best(frontier.size());
        std::vector<Accumulator> acc(frontier.size());

        for (std::size_t f = 0; f < d; ++f) {
            std::fill(acc.begin(), acc.end(), Accumulator{});
            for (std::uint32_t row : sorted[f]) {
                const int s = slot[static_cast<std::size_t>(node_of[row])];
                if (s < 0) continue;
                auto& a = acc[static_cast<std::size_t>(s)];
                const double value = x(row, f);
                if (a.started && value > a.last) {
                    const auto& total = sums[static_cast<std::size_t>(frontier[static_cast<std::size_t>(s)])];
                    const double gain = 0.5 * (score(a.g, a.h, lambda) + score(total.g - a.g, total.h - a.h, lambda) -
                                               score(total.g, total.h, lambda));
                    auto& b = best[static_cast<std::size_t>(s)];
                    if (gain > kMinGain && gain > b.gain + kMinGain) {
                        const double mid = std::midpoint(a.last, value);
                        b = Candidate{gain, static_cast<int>(f), mid < value ? mid : a.last};
                    }
                }
                a.g += grad[row];
                a.h += hess[row];
                a.last = value;
                a.started = true;
            }
        }

        std::vector<int> next;
        for (std::size_t s = 0; s < frontier.size(); ++s) {
            if (best[s].feature < 0) continue;
            const auto id = static_cast<std::size_t>(frontier[s]);
            tree.nodes[id].feature = best[s].feature;
            tree.nodes[id].threshold = best[s].threshold;
            tree.nodes[id].gain = best[s].gain;
            tree.nodes[id].left = static_cast<int>(tree.nodes.size());
            tree.nodes[id].right = static_cast<int>(tree.nodes.size() + 1);
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            sums.resize(tree.nodes.size());
            next.push_back(tree.nodes[id].left);
            next.push_back(tree.nodes[id].right);
        }
        if (next.empty()) break;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& parent = tree.nodes[static_cast<std::size_t>(node_of[i])];
            if (parent.is_leaf()) continue;
            const int child = x(i, static_cast<std::size_t>(parent.feature)) <= parent.threshold ? parent.left : parent.right;
            node_of[i] = child;
            sums[static_cast<std::size_t>(child)].g += grad[i];
            sums[static_cast<std::size_t>(child)].h += hess[i];
        }
        frontier = std::move(next);
    }

    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        auto& node = tree.nodes[id];
        node.cover = sums[id].h;
        if (node.is_leaf()) {
            const double denom = sums[id].h + lambda;
            node.value = denom > 0.0 ? -sums[id].g / denom : 0.0;
        }
    }
    return tree;
}

}  // namespace

GradientBoostParams fit_gradient_boost(const GradientBoostConfig& config, const LabeledDataset& data) {
    const std::size_t n = data.size();
    const std::size_t d = data.feature_count();
    const Matrix& x = data.features;

    std::vector<std::vector<std::uint32_t>> sorted(d, std::vector<std::uint32_t>(n));
    for (std::size_t f = 0; f < d; ++f) {
        auto& order = sorted[f];
        std::iota(order.begin(), order.end(), 0U);
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return x(a, f) < x(b, f); });
    }

    const double attacks = static_cast<double>(std::count(data.labels.begin(), data.labels.end(), kAttack));
    const double base = attacks / static_cast<double>(n);

    GradientBoostParams p;
    p.initial_logit = std::log(base / (1.0 - base));
    std::vector<double> margin(n, p.initial_logit);
    std::vector<double> grad(n);
    std::vector<double> hess(n);
    std::vector<int> node_of(n);

    for (int round = 0; round < config.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double prob = sigmoid(margin[i]);
            grad[i] = prob - static_cast<double>(data.labels[i]);
            hess[i] = prob * (1.0 - prob);
        }
        Tree tree = grow_newton_tree(x, sorted, grad, hess, config.max_depth, config.reg_lambda, node_of);
        for (std::size_t i = 0; i < n; ++i) {
            margin[i] += config.learning_rate * tree.nodes[static_cast<std::size_t>(node_of[i])].value;
        }
        p.trees.push_back(std::move(tree));
        p.learning_rates.push_back(config.learning_rate);
    }
    return p;
}

}  // namespace flowgate::detail
