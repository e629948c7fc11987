#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "flowgate/importance.hpp"
#include "flowgate/preprocess.hpp"

namespace flowgate {
namespace {

void sort_entries(std::vector<RankedFeature>& entries, bool by_magnitude) {
    std::stable_sort(entries.begin(), entries.end(), [&](const RankedFeature& a, const RankedFeature& b) {
        const double ka = by_magnitude ? std::abs(a.score) : a.score;
        const double kb = by_magnitude ? std::abs(b.score) : b.score;
        if (ka != kb) return ka > kb;
        return a.feature < b.feature;
    });
}

void accumulate_gains(const Tree& tree, std::vector<double>& totals) {
    for (const auto& node : tree.nodes) {
        if (!node.is_leaf()) totals[static_cast<std::size_t>(node.feature)] += node.gain;
    }
}

}  // namespace

std::string method_name(RankingMethod method) {
    return method == RankingMethod::pearson_label ? "pearson-label" : "impurity";
}

FeatureRanking label_correlations(const LabeledDataset& ds) {
    const auto attacks = std::count(ds.labels.begin(), ds.labels.end(), kAttack);
    if (attacks == 0 || static_cast<std::size_t>(attacks) == ds.labels.size()) {
        throw std::invalid_argument("label_correlations: labels have a single class (zero variance)");
    }
    const std::vector<double> y(ds.labels.begin(), ds.labels.end());
    FeatureRanking ranking;
    ranking.method = RankingMethod::pearson_label;
    for (std::size_t f = 0; f < ds.feature_count(); ++f) {
        ranking.entries.push_back({ds.feature_names[f], pearson(ds.features.column(f), y)});
    }
    sort_entries(ranking.entries, true);
    return ranking;
}

FeatureRanking impurity_importance(const TrainedModel& model) {
    std::vector<double> totals(model.feature_count, 0.0);
    if (const auto* tree = std::get_if<DecisionTreeParams>(&model.params)) {
        accumulate_gains(tree->tree, totals);
    } else if (const auto* forest = std::get_if<RandomForestParams>(&model.params)) {
        for (const auto& t : forest->trees) accumulate_gains(t, totals);
    } else if (const auto* gbt = std::get_if<GradientBoostParams>(&model.params)) {
        for (const auto& t : gbt->trees) accumulate_gains(t, totals);
    } else {
        throw std::invalid_argument("impurity_importance: " + family_display_name(model.config) +
                                    " is not a tree model");
    }
    double sum = 0.0;
    for (double v : totals) sum += v;
    FeatureRanking ranking;
    ranking.method = RankingMethod::impurity;
    for (std::size_t f = 0; f < totals.size(); ++f) {
        ranking.entries.push_back({model.feature_names[f], sum > 0.0 ? totals[f] / sum : 0.0});
    }
    sort_entries(ranking.entries, false);
    return ranking;
}

FeatureRanking top_k(const FeatureRanking& ranking, std::size_t k) {
    if (k == 0) throw std::invalid_argument("top_k: k must be at least 1");
    FeatureRanking out;
    out.method = ranking.method;
    const std::size_t n = std::min(k, ranking.entries.size());
    out.entries.assign(ranking.entries.begin(), ranking.entries.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

void write_ranking_csv(const std::vector<FeatureRanking>& rankings, std::ostream& out) {
    RawTable table;
    table.headers = {"rank", "feature", "score", "method"};
    char buf[32];
    for (const auto& ranking : rankings) {
        for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", ranking.entries[i].score);
            table.rows.push_back({std::to_string(i + 1), ranking.entries[i].feature, buf, method_name(ranking.method)});
        }
    }
    write_flow_csv(table, out);
}

nlohmann::json ranking_to_json(const FeatureRanking& ranking) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        entries.push_back({{"rank", i + 1}, {"feature", ranking.entries[i].feature}, {"score", ranking.entries[i].score}});
    }
    return {{"method", method_name(ranking.method)}, {"entries", entries}};
}

}  // namespace flowgate
