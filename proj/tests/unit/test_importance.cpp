#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "flowgate/importance.hpp"
#include "flowgate/synth.hpp"

namespace fg = flowgate;

namespace {

fg::LabeledDataset dataset(const std::vector<std::string>& names, std::size_t n, std::uint64_t seed,
                           const std::function<double(std::size_t, int, std::mt19937_64&)>& value) {
    std::mt19937_64 rng(seed);
    fg::LabeledDataset ds;
    ds.features = fg::Matrix(n, names.size());
    ds.feature_names = names;
    for (std::size_t i = 0; i < n; ++i) {
        ds.labels.push_back(static_cast<int>(rng() % 2));
        for (std::size_t j = 0; j < names.size(); ++j) ds.features(i, j) = value(j, ds.labels.back(), rng);
    }
    return ds;
}

}  // namespace

TEST(LabelCorrelations, LabelCopyFirstConstantLast) {
    const auto ds = dataset({"const", "copy", "noisy"}, 200, 1, [](std::size_t j, int y, std::mt19937_64& rng) {
        if (j == 0) return 3.0;
        if (j == 1) return static_cast<double>(y);
        return y + std::normal_distribution<double>(0, 2)(rng);
    });
    const auto r = fg::label_correlations(ds);
    ASSERT_EQ(r.entries.size(), 3u);
    EXPECT_EQ(r.method, fg::RankingMethod::pearson_label);
    EXPECT_EQ(r.entries.front().feature, "copy");
    EXPECT_NEAR(std::abs(r.entries.front().score), 1.0, 1e-12);
    EXPECT_EQ(r.entries.back().feature, "const");
    EXPECT_EQ(r.entries.back().score, 0.0);
    for (const auto& e : r.entries) EXPECT_LE(std::abs(e.score), 1.0);
}

TEST(LabelCorrelations, MirroredFeaturesTieByName) {
    const auto ds = dataset({"zeta", "alpha"}, 100, 2, [](std::size_t j, int y, std::mt19937_64&) {
        return j == 0 ? static_cast<double>(y) : -static_cast<double>(y);
    });
    const auto r = fg::label_correlations(ds);
    EXPECT_EQ(r.entries[0].feature, "alpha");
    EXPECT_EQ(r.entries[1].feature, "zeta");
}

TEST(LabelCorrelations, SingleClassIsAnError) {
    auto ds = dataset({"a"}, 10, 3, [](std::size_t, int, std::mt19937_64&) { return 1.0; });
    std::fill(ds.labels.begin(), ds.labels.end(), 1);
    EXPECT_THROW(fg::label_correlations(ds), std::invalid_argument);
}

TEST(ImpurityImportance, SingleSplitFeatureGetsEverything) {
    const auto ds = dataset({"a", "b"}, 200, 4, [](std::size_t j, int y, std::mt19937_64& rng) {
        return j == 0 ? y * 10.0 : std::normal_distribution<double>()(rng);
    });
    const auto model = fg::train(fg::DecisionTreeConfig{1, 1}, ds);
    const auto r = fg::impurity_importance(model);
    EXPECT_EQ(r.entries[0].feature, "a");
    EXPECT_DOUBLE_EQ(r.entries[0].score, 1.0);
    EXPECT_EQ(r.entries[1].score, 0.0);
}

TEST(ImpurityImportance, LeafOnlyModelIsAllZero) {
    fg::TrainedModel model;
    model.config = fg::DecisionTreeConfig{};
    fg::Tree tree;
    tree.nodes.push_back(fg::TreeNode{});
    model.params = fg::DecisionTreeParams{tree};
    model.feature_names = {"a", "b"};
    model.feature_count = 2;
    const auto r = fg::impurity_importance(model);
    for (const auto& e : r.entries) EXPECT_EQ(e.score, 0.0);
}

TEST(ImpurityImportance, NonTreeModelIsAnError) {
    const auto ds = dataset({"a"}, 50, 5, [](std::size_t, int y, std::mt19937_64&) { return y * 1.0; });
    EXPECT_THROW(fg::impurity_importance(fg::train(fg::KnnConfig{3}, ds)), std::invalid_argument);
}

TEST(ImpurityImportance, ForestPrefersGenerativeFeature) {
    const auto ds = dataset({"signal", "noise"}, 5000, 6, [](std::size_t j, int y, std::mt19937_64& rng) {
        std::normal_distribution<double> normal;
        return j == 0 ? 2.0 * y + normal(rng) : normal(rng);
    });
    fg::RandomForestConfig rf;
    rf.n_trees = 20;
    rf.max_depth = 8;
    const auto r = fg::impurity_importance(fg::train(rf, ds));
    EXPECT_EQ(r.entries[0].feature, "signal");
    EXPECT_GT(r.entries[0].score, r.entries[1].score);
}

TEST(ImpurityImportance, NormalisedForEveryTreeFamily) {
    const auto ds = dataset({"a", "b", "c"}, 600, 7, [](std::size_t j, int y, std::mt19937_64& rng) {
        return (j + 1.0) * y + std::normal_distribution<double>(0, 2)(rng);
    });
    fg::RandomForestConfig rf;
    rf.n_trees = 10;
    for (const fg::ClassifierConfig& config :
         std::vector<fg::ClassifierConfig>{fg::DecisionTreeConfig{}, rf, fg::GradientBoostConfig{20, 0.1, 3, 1.0}}) {
        const auto r = fg::impurity_importance(fg::train(config, ds));
        EXPECT_EQ(r.method, fg::RankingMethod::impurity);
        double sum = 0.0;
        for (const auto& e : r.entries) {
            EXPECT_GE(e.score, 0.0);
            sum += e.score;
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
        for (std::size_t i = 1; i < r.entries.size(); ++i) EXPECT_GE(r.entries[i - 1].score, r.entries[i].score);
    }
}

TEST(ImpurityImportance, InvariantUnderPositiveColumnScaling) {
    const auto ds = dataset({"a", "b", "c"}, 800, 8, [](std::size_t j, int y, std::mt19937_64& rng) {
        return (j + 1.0) * y + std::normal_distribution<double>(0, 2)(rng);
    });
    auto scaled = ds;
    const double factor[3] = {16.0, 0.25, 2.0};
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < 3; ++j) scaled.features(i, j) *= factor[j];
    }
    for (const fg::ClassifierConfig& config :
         std::vector<fg::ClassifierConfig>{fg::DecisionTreeConfig{}, fg::GradientBoostConfig{20, 0.1, 3, 1.0}}) {
        const auto a = fg::impurity_importance(fg::train(config, ds));
        const auto b = fg::impurity_importance(fg::train(config, scaled));
        ASSERT_EQ(a.entries.size(), b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            EXPECT_EQ(a.entries[i].feature, b.entries[i].feature);
            EXPECT_NEAR(a.entries[i].score, b.entries[i].score, 1e-9);
        }
    }
}

TEST(TopK, Truncation) {
    fg::FeatureRanking r;
    for (int i = 0; i < 40; ++i) r.entries.push_back({"f" + std::to_string(i), 1.0 - i / 100.0});
    EXPECT_EQ(fg::top_k(r, 10).entries.size(), 10u);
    EXPECT_EQ(fg::top_k(r, 100), r);
    EXPECT_EQ(fg::top_k(r, r.entries.size()), r);
    const auto one = fg::top_k(r, 1);
    ASSERT_EQ(one.entries.size(), 1u);
    EXPECT_EQ(one.entries[0], r.entries[0]);
}

TEST(RankingCsv, HeaderAndMethodColumn) {
    fg::FeatureRanking a, b;
    a.entries = {{"x", 0.5}};
    b.method = fg::RankingMethod::impurity;
    b.entries = {{"x", 1.0}, {"y", 0.0}};
    std::ostringstream out;
    fg::write_ranking_csv({a, b}, out);
    std::istringstream in(out.str());
    const auto table = fg::parse_flow_csv(in);
    EXPECT_EQ(table.headers, (std::vector<std::string>{"rank", "feature", "score", "method"}));
    ASSERT_EQ(table.row_count(), 3u);
    EXPECT_EQ(table.rows[0][3], "pearson-label");
    EXPECT_EQ(table.rows[2][0], "2");
    EXPECT_EQ(table.rows[2][3], "impurity");
}
