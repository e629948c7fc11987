#pragma once

// Independent reference implementations used by unit and acceptance tests.
// None of these call into the library code they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace flowgate::oracle {

struct Scores {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline Scores scores_from_counts(double tp, double tn, double fp, double fn) {
    Scores s;
    s.accuracy = (tp + tn) / (tp + tn + fp + fn);
    s.precision = tp + fp == 0 ? 0.0 : tp / (tp + fp);
    s.recall = tp + fn == 0 ? 0.0 : tp / (tp + fn);
    s.f1 = s.precision + s.recall == 0 ? 0.0 : 2 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

// Probability that a random positive outscores a random negative, ties count one half.
inline double pair_counting_auc(std::span<const int> labels, std::span<const double> scores) {
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] != 0) continue;
            pairs += 1.0;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

// Full distance scan, stable sort by distance (so ties keep training order), majority vote.
inline int brute_force_knn(const std::vector<std::vector<double>>& train, std::span<const int> labels, int k,
                           std::span<const double> query) {
    std::vector<double> dist(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        double ss = 0.0;
        for (std::size_t j = 0; j < query.size(); ++j) ss += (train[i][j] - query[j]) * (train[i][j] - query[j]);
        dist[i] = std::sqrt(ss);
    }
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    int votes = 0;
    for (int i = 0; i < k; ++i) votes += labels[order[static_cast<std::size_t>(i)]];
    return 2 * votes > k ? 1 : 0;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Mean binary cross-entropy of logits against 0/1 labels.
inline double log_loss(std::span<const int> labels, std::span<const double> logits) {
    double total = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double z = logits[i];
        // log(1 + e^z) - y z, computed stably
        const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        total += softplus - labels[i] * z;
    }
    return total / static_cast<double>(labels.size());
}

inline double gini(double positive_weight, double total_weight) {
    if (total_weight <= 0) return 0.0;
    const double p = positive_weight / total_weight;
    return 1.0 - p * p - (1 - p) * (1 - p);
}

}  // namespace flowgate::oracle
