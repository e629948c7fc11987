#include <cmath>
#include <numbers>

#include "flowgate/learners.hpp"

namespace flowgate::detail {
namespace {
constexpr double kVarianceFloor = 1e-9;
}

NaiveBayesParams fit_naive_bayes(const LabeledDataset& data) {
    const std::size_t d = data.feature_count();
    NaiveBayesParams p;
    std::array<double, 2> counts{0.0, 0.0};
    for (int c : {0, 1}) {
        p.mean[c].assign(d, 0.0);
        p.variance[c].assign(d, 0.0);
    }
    for (std::size_t r = 0; r < data.size(); ++r) {
        const int c = data.labels[r];
        counts[c] += 1.0;
        auto row = data.features.row(r);
        for (std::size_t j = 0; j < d; ++j) p.mean[c][j] += row[j];
    }
    for (int c : {0, 1}) {
        for (auto& m : p.mean[c]) m /= counts[c];
    }
    for (std::size_t r = 0; r < data.size(); ++r) {
        const int c = data.labels[r];
        auto row = data.features.row(r);
        for (std::size_t j = 0; j < d; ++j) {
            const double dx = row[j] - p.mean[c][j];
            p.variance[c][j] += dx * dx;
        }
    }
    const double n = counts[0] + counts[1];
    for (int c : {0, 1}) {
        for (auto& v : p.variance[c]) v = std::max(v / counts[c], kVarianceFloor);
        p.log_prior[c] = std::log(counts[c] / n);
    }
    return p;
}

double naive_bayes_score(const NaiveBayesParams& p, std::span<const double> row) {
    std::array<double, 2> joint{p.log_prior[0], p.log_prior[1]};
    for (int c : {0, 1}) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double var = p.variance[c][j];
            const double dx = row[j] - p.mean[c][j];
            joint[c] += -0.5 * std::log(2.0 * std::numbers::pi * var) - dx * dx / (2.0 * var);
        }
    }
    return joint[1] - joint[0];
}

}  // namespace flowgate::detail
