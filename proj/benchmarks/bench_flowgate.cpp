#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "flowgate/flowgate.hpp"

namespace fg = flowgate;

namespace {

fg::SynthSpec spec_for(std::size_t rows) {
    fg::SynthSpec spec;
    spec.n_benign = rows / 10;
    spec.n_attack = rows - rows / 10;
    spec.n_numeric_features = 10;
    spec.class_separation = 4.0;
    spec.null_rate = 0.01;
    spec.inf_rate = 0.005;
    spec.n_noise_columns = 2;
    spec.n_categorical_columns = 1;
    spec.seed = 7;
    return spec;
}

fg::LabeledDataset dataset(std::size_t rows) {
    const auto synth = fg::generate(spec_for(rows));
    const auto binarized = fg::binarize_labels(synth.table);
    const auto plan = fg::fit_plan(binarized.remaining, binarized.labels, fg::kDefaultCorrelationThreshold);
    return fg::apply_plan(plan, binarized.remaining, binarized.labels);
}

void BM_ParseCsv(benchmark::State& state) {
    std::ostringstream out;
    fg::write_flow_csv(fg::generate(spec_for(static_cast<std::size_t>(state.range(0)))).table, out);
    const std::string text = out.str();
    for (auto _ : state) {
        std::istringstream in(text);
        benchmark::DoNotOptimize(fg::parse_flow_csv(in));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseCsv)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_FitPlan(benchmark::State& state) {
    const auto synth = fg::generate(spec_for(static_cast<std::size_t>(state.range(0))));
    const auto binarized = fg::binarize_labels(synth.table);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fg::fit_plan(binarized.remaining, binarized.labels, 0.01));
    }
}
BENCHMARK(BM_FitPlan)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_RocCurve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = static_cast<int>(i % 3 != 0);
        scores[i] = normal(rng) + labels[i];
    }
    for (auto _ : state) benchmark::DoNotOptimize(fg::roc_curve(labels, scores));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_RocCurve)->Arg(10000)->Arg(100000);

template <typename Config>
void BM_Train(benchmark::State& state, Config config) {
    const auto ds = dataset(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fg::train(config, ds));
}

fg::RandomForestConfig small_forest() {
    fg::RandomForestConfig config;
    config.n_trees = 20;
    return config;
}

BENCHMARK_CAPTURE(BM_Train, naive_bayes, fg::GaussianNBConfig{})->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Train, linear_svm, fg::LinearSvmConfig{})->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Train, decision_tree, fg::DecisionTreeConfig{})->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Train, random_forest_20, small_forest())->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Train, adaboost, fg::AdaBoostConfig{})->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Train, gradient_boost, fg::GradientBoostConfig{})->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
    const auto ds = dataset(static_cast<std::size_t>(state.range(0)));
    const auto model = fg::train(fg::KnnConfig{5}, ds);
    std::size_t row = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fg::predict_score(model, ds.features.row(row)));
        row = (row + 1) % ds.size();
    }
}
BENCHMARK(BM_KnnPredict)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
