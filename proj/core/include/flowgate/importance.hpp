#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowgate/dataio.hpp"
#include "flowgate/learners.hpp"

namespace flowgate {

enum class RankingMethod { pearson_label, impurity };

std::string method_name(RankingMethod method);

struct RankedFeature {
    std::string feature;
    double score = 0.0;
    friend bool operator==(const RankedFeature&, const RankedFeature&) = default;
};

struct FeatureRanking {
    RankingMethod method = RankingMethod::pearson_label;
    std::vector<RankedFeature> entries;
    friend bool operator==(const FeatureRanking&, const FeatureRanking&) = default;
};

inline constexpr std::size_t kDefaultTopK = 10;

// Pearson r of each feature against the 0/1 label, sorted by |r| descending,
// ties by feature name.
FeatureRanking label_correlations(const LabeledDataset& ds);

// Normalised sum of split gains per feature for tree, forest and GBT models.
FeatureRanking impurity_importance(const TrainedModel& model);

FeatureRanking top_k(const FeatureRanking& ranking, std::size_t k);

void write_ranking_csv(const std::vector<FeatureRanking>& rankings, std::ostream& out);
nlohmann::json ranking_to_json(const FeatureRanking& ranking);

}  // namespace flowgate
