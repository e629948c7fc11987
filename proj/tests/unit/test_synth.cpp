#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "flowgate/preprocess.hpp"
#include "flowgate/synth.hpp"

namespace fg = flowgate;

TEST(Synth, NullCountIsBinomial) {
    fg::SynthSpec spec;
    spec.n_benign = 5000;
    spec.n_attack = 5000;
    spec.n_numeric_features = 20;
    spec.null_rate = 0.01;
    const auto data = fg::generate(spec);
    std::size_t nulls = 0;
    for (const auto& row : data.table.rows) {
        for (std::size_t c = 0; c < 20; ++c) nulls += fg::classify_cell(row[c]).kind == fg::CellKind::null;
    }
    const double mean = 200000 * 0.01, sigma = std::sqrt(200000 * 0.01 * 0.99);
    EXPECT_LE(std::abs(static_cast<double>(nulls) - mean), 5 * sigma) << nulls;
}

TEST(Synth, Deterministic) {
    fg::SynthSpec spec;
    spec.n_benign = 300;
    spec.n_attack = 200;
    spec.null_rate = 0.03;
    spec.inf_rate = 0.02;
    spec.n_noise_columns = 2;
    spec.n_categorical_columns = 2;
    spec.n_constant_columns = 1;
    const auto a = fg::generate(spec);
    const auto b = fg::generate(spec);
    EXPECT_EQ(a.table, b.table);
    EXPECT_EQ(a.labels, b.labels);
    spec.seed = 2;
    EXPECT_NE(fg::generate(spec).table, a.table);
}

TEST(Synth, LayoutAndLabels) {
    fg::SynthSpec spec;
    spec.n_benign = 40;
    spec.n_attack = 60;
    spec.n_numeric_features = 3;
    spec.n_noise_columns = 2;
    spec.n_constant_columns = 2;
    spec.n_categorical_columns = 1;
    const auto data = fg::generate(spec);
    ASSERT_EQ(data.table.headers.size(), 3u + 2 + 2 + 1 + 1);
    EXPECT_EQ(data.table.headers.back(), "Label");
    EXPECT_EQ(data.informative, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(std::set<std::string>(data.table.headers.begin(), data.table.headers.end()).size(),
              data.table.headers.size());
    std::size_t attacks = 0;
    for (std::size_t r = 0; r < data.labels.size(); ++r) {
        const auto& label = data.table.rows[r].back();
        EXPECT_EQ(label, data.labels[r] ? "Attack" : "BENIGN");
        attacks += data.labels[r];
    }
    EXPECT_EQ(attacks, 60u);
    EXPECT_EQ(fg::binarize_labels(data.table).labels, data.labels);
    // Constant columns hold one value; categorical cells come from a small alphabet.
    for (std::size_t c = 5; c < 7; ++c) {
        std::set<std::string> values;
        for (const auto& row : data.table.rows) values.insert(row[c]);
        EXPECT_EQ(values.size(), 1u);
    }
    std::set<std::string> categories;
    for (const auto& row : data.table.rows) categories.insert(row[7]);
    EXPECT_LE(categories.size(), 5u);
    EXPECT_GE(categories.size(), 2u);
}

TEST(Synth, ClassMeansSeparatedAsRequested) {
    fg::SynthSpec spec;
    spec.n_benign = 20000;
    spec.n_attack = 20000;
    spec.n_numeric_features = 4;
    spec.class_separation = 6.0;
    const auto data = fg::generate(spec);
    double dist2 = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        double sum[2] = {0, 0};
        for (std::size_t r = 0; r < data.labels.size(); ++r) sum[data.labels[r]] += std::stod(data.table.rows[r][j]);
        const double diff = sum[1] / 20000 - sum[0] / 20000;
        dist2 += diff * diff;
    }
    EXPECT_NEAR(std::sqrt(dist2), 6.0, 0.05);
}

TEST(Synth, DecayConcentratesSeparationButKeepsDistance) {
    fg::SynthSpec spec;
    spec.n_benign = 20000;
    spec.n_attack = 20000;
    spec.n_numeric_features = 3;
    spec.separation_decay = 0.5;
    spec.scale_ratio = 10.0;
    const auto data = fg::generate(spec);
    std::vector<double> diff;
    double scale = 1.0;
    for (std::size_t j = 0; j < 3; ++j, scale *= 10.0) {
        double sum[2] = {0, 0};
        for (std::size_t r = 0; r < data.labels.size(); ++r) sum[data.labels[r]] += std::stod(data.table.rows[r][j]);
        diff.push_back((sum[1] - sum[0]) / 20000 / scale);
    }
    EXPECT_GT(diff[0], diff[1]);
    EXPECT_GT(diff[1], diff[2]);
    EXPECT_NEAR(std::hypot(diff[0], diff[1], diff[2]), 6.0, 0.05);
}

TEST(Synth, CorrelatedFeaturesReachTargetCorrelation) {
    fg::SynthSpec spec;
    spec.n_benign = 20000;
    spec.n_attack = 0;
    spec.n_numeric_features = 3;
    spec.feature_correlation = 0.8;
    const auto data = fg::generate(spec);
    std::vector<double> a, b;
    for (const auto& row : data.table.rows) {
        a.push_back(std::stod(row[0]));
        b.push_back(std::stod(row[2]));
    }
    EXPECT_NEAR(fg::pearson(a, b), 0.8, 0.02);
}

TEST(Synth, ConstantColumnsAlwaysDropped) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        fg::SynthSpec spec;
        spec.n_benign = 500;
        spec.n_attack = 500;
        spec.n_constant_columns = 3;
        spec.null_rate = 0.05;
        spec.inf_rate = 0.05;
        spec.seed = seed;
        const auto data = fg::generate(spec);
        const auto bin = fg::binarize_labels(data.table);
        const auto plan = fg::fit_plan(bin.remaining, bin.labels, fg::kDefaultCorrelationThreshold);
        for (std::size_t c = spec.n_numeric_features; c < spec.n_numeric_features + 3; ++c) {
            EXPECT_TRUE(plan.dropped_zero_variance.contains(data.table.headers[c]));
        }
    }
}

TEST(Synth, NoiseColumnsDroppedAcrossSeeds) {
    std::size_t dropped = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        fg::SynthSpec spec;
        spec.n_benign = 5000;
        spec.n_attack = 5000;
        spec.n_noise_columns = 5;
        spec.seed = seed;
        const auto data = fg::generate(spec);
        const auto bin = fg::binarize_labels(data.table);
        const auto plan = fg::fit_plan(bin.remaining, bin.labels, 0.01);
        for (std::size_t c = spec.n_numeric_features; c < spec.n_numeric_features + 5; ++c) {
            dropped += plan.dropped_low_correlation.contains(data.table.headers[c]);
            ++total;
        }
    }
    EXPECT_GE(static_cast<double>(dropped) / static_cast<double>(total), 0.95);
}

TEST(Synth, RawNoiseKeepsSamplingCorrelation) {
    fg::SynthSpec spec;
    spec.n_benign = 500;
    spec.n_attack = 500;
    spec.n_noise_columns = 1;
    spec.decorrelate_noise = false;
    const auto data = fg::generate(spec);
    std::vector<double> x, y(data.labels.begin(), data.labels.end());
    for (const auto& row : data.table.rows) x.push_back(std::stod(row[spec.n_numeric_features]));
    EXPECT_NE(fg::pearson(x, y), 0.0);
}

TEST(Synth, InvalidSpecsRejected) {
    auto bad = [](auto mutate) {
        fg::SynthSpec spec;
        mutate(spec);
        return spec;
    };
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.class_separation = -1; })), std::invalid_argument);
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.null_rate = 1.0; })), std::invalid_argument);
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.inf_rate = -0.1; })), std::invalid_argument);
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.n_numeric_features = 0; })), std::invalid_argument);
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.n_benign = s.n_attack = 0; })), std::invalid_argument);
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.feature_correlation = 1.0; })), std::invalid_argument);
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.attack_modes = 3; })), std::invalid_argument);
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.scale_ratio = 0.5; })), std::invalid_argument);
    EXPECT_THROW(fg::generate(bad([](auto& s) { s.separation_decay = 0.0; })), std::invalid_argument);
}
