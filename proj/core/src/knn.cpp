#include <algorithm>

#include "flowgate/learners.hpp"

namespace flowgate {

namespace detail {

KnnParams fit_knn(const KnnConfig&, const LabeledDataset& data) { return KnnParams{data.features, data.labels}; }

double knn_score(const KnnParams& params, int k, std::span<const double> row) {
    const auto neighbours = knn_neighbors(params, k, row);
    std::size_t attacks = 0;
    for (std::size_t i : neighbours) attacks += params.labels[i] == kAttack ? 1 : 0;
    return static_cast<double>(attacks) / static_cast<double>(neighbours.size());
}

}  // namespace detail

std::vector<std::size_t> knn_neighbors(const KnnParams& params, int k, std::span<const double> row) {
    const std::size_t n = params.train.rows();
    const std::size_t d = params.train.cols();
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), n);

    std::vector<std::pair<double, std::size_t>> dist(n);
    const double* base = params.train.data().data();
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = base + i * d;
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - row[j];
            s += diff * diff;
        }
        dist[i] = {s, i};
    }
    // Pair ordering breaks equal distances by training-row index.
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take - 1), dist.end());
    std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take));

    std::vector<std::size_t> out(take);
    for (std::size_t i = 0; i < take; ++i) out[i] = dist[i].second;
    return out;
}

}  // namespace flowgate
