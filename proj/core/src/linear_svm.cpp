#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "flowgate/learners.hpp"

namespace flowgate::detail {

// Pegasos: primal stochastic subgradient descent on the L2-regularised hinge
// loss. Inputs are standardised per column and augmented with a constant 1
// whose weight is the bias.
LinearSvmParams fit_linear_svm(const LinearSvmConfig& config, const LabeledDataset& data) {
    const std::size_t n = data.size();
    const std::size_t d = data.feature_count();

    LinearSvmParams p;
    p.center.assign(d, 0.0);
    p.scale.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = data.features.row(r);
        for (std::size_t j = 0; j < d; ++j) p.center[j] += row[j];
    }
    for (auto& c : p.center) c /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = data.features.row(r);
        for (std::size_t j = 0; j < d; ++j) {
            const double dx = row[j] - p.center[j];
            p.scale[j] += dx * dx;
        }
    }
    for (auto& s : p.scale) {
        s = std::sqrt(s / static_cast<double>(n));
        if (!(s > 0.0)) s = 1.0;
    }

    Matrix z(n, d + 1);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = data.features.row(r);
        for (std::size_t j = 0; j < d; ++j) z(r, j) = (row[j] - p.center[j]) / p.scale[j];
        z(r, d) = 1.0;
    }

    const double lambda = config.reg_lambda;
    const double radius = 1.0 / std::sqrt(lambda);
    std::vector<double> w(d + 1, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(config.seed);

    std::size_t t = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t r : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double y = data.labels[r] == kAttack ? 1.0 : -1.0;
            auto x = z.row(r);
            const double margin = y * std::inner_product(w.begin(), w.end(), x.begin(), 0.0);
            const double shrink = 1.0 - eta * lambda;
            for (auto& wj : w) wj *= shrink;
            if (margin < 1.0) {
                for (std::size_t j = 0; j <= d; ++j) w[j] += eta * y * x[j];
            }
            const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
            if (norm > radius) {
                const double s = radius / norm;
                for (auto& wj : w) wj *= s;
            }
        }
    }

    p.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
    p.bias = w[d];
    return p;
}

double linear_svm_score(const LinearSvmParams& p, std::span<const double> row) {
    double s = p.bias;
    const bool standardise = !p.center.empty();
    for (std::size_t j = 0; j < row.size(); ++j) {
        const double x = standardise ? (row[j] - p.center[j]) / p.scale[j] : row[j];
        s += p.weights[j] * x;
    }
    return s;
}

}  // namespace flowgate::detail
