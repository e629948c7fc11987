#include <algorithm>
#include <cmath>
#include <random>

#include "flowgate/learners.hpp"
#include "flowgate/parallel.hpp"

namespace flowgate::detail {
namespace {

// Floor on AdaBoost's weighted error so a perfect stump gets a finite vote.
constexpr double kMinStumpError = 1e-10;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

DecisionTreeParams fit_decision_tree(const DecisionTreeConfig& config, const LabeledDataset& data) {
    const std::vector<double> weights(data.size(), 1.0);
    CartOptions options;
    options.max_depth = config.max_depth;
    options.min_leaf = config.min_leaf;
    return DecisionTreeParams{grow_cart(data.features, data.labels, weights, options)};
}

RandomForestParams fit_random_forest(const RandomForestConfig& config, const LabeledDataset& data) {
    const std::size_t n = data.size();
    const std::size_t d = data.feature_count();
    const std::size_t per_split =
        config.max_features
            ? std::min(*config.max_features, d)
            : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));

    RandomForestParams p;
    p.trees.resize(static_cast<std::size_t>(config.n_trees));
    parallel_for(p.trees.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const std::uint64_t tree_seed = splitmix64(config.seed ^ splitmix64(t));
            std::mt19937_64 rng(tree_seed);
            std::vector<double> weights(n, 1.0);
            if (config.bootstrap) {
                std::fill(weights.begin(), weights.end(), 0.0);
                std::uniform_int_distribution<std::size_t> pick(0, n - 1);
                for (std::size_t i = 0; i < n; ++i) weights[pick(rng)] += 1.0;
            }
            CartOptions options;
            options.max_depth = config.max_depth;
            options.min_leaf = config.min_leaf;
            options.features_per_split = per_split;
            options.seed = rng();
            p.trees[t] = grow_cart(data.features, data.labels, weights, options);
        }
    });
    return p;
}

// Discrete AdaBoost over weighted-Gini stumps, alpha = 0.5 ln((1 - err) / err).
AdaBoostParams fit_adaboost(const AdaBoostConfig& config, const LabeledDataset& data) {
    const std::size_t n = data.size();
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    std::vector<double> votes(n);
    AdaBoostParams p;

    CartOptions stump_options;
    stump_options.max_depth = 1;
    stump_options.min_leaf = 1;

    for (int round = 0; round < config.rounds; ++round) {
        Tree stump = grow_cart(data.features, data.labels, weights, stump_options);
        if (stump.nodes.front().is_leaf()) break;

        double total = 0.0;
        double wrong = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            votes[i] = adaboost_vote(stump, data.features.row(i));
            total += weights[i];
            if ((votes[i] > 0.0) != (data.labels[i] == kAttack)) wrong += weights[i];
        }
        const double error = wrong / total;
        if (error >= 0.5) break;

        const bool perfect = error <= 0.0;
        const double clipped = std::max(error, kMinStumpError);
        const double alpha = 0.5 * std::log((1.0 - clipped) / clipped);
        p.stumps.push_back(std::move(stump));
        p.alphas.push_back(alpha);
        p.errors.push_back(error);
        if (perfect) break;

        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = data.labels[i] == kAttack ? 1.0 : -1.0;
            weights[i] *= std::exp(-alpha * y * votes[i]);
            norm += weights[i];
        }
        for (auto& w : weights) w /= norm;
    }
    if (p.stumps.empty()) throw TrainingError("adaboost: no stump improves on chance");
    return p;
}

}  // namespace flowgate::detail
