#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowgate/dataio.hpp"
#include "flowgate/matrix.hpp"
#include "flowgate/tree.hpp"

namespace flowgate {

inline constexpr int kModelVersion = 1;

// ---------------------------------------------------------------------------
// Hyperparameters, one struct per family.

struct GaussianNBConfig {
    friend bool operator==(const GaussianNBConfig&, const GaussianNBConfig&) = default;
};

struct KnnConfig {
    int k = 5;  // positive and odd
    friend bool operator==(const KnnConfig&, const KnnConfig&) = default;
};

struct LinearSvmConfig {
    double reg_lambda = 1e-4;
    int epochs = 20;
    std::uint64_t seed = 0;
    friend bool operator==(const LinearSvmConfig&, const LinearSvmConfig&) = default;
};

struct DecisionTreeConfig {
    int max_depth = 16;
    int min_leaf = 2;
    friend bool operator==(const DecisionTreeConfig&, const DecisionTreeConfig&) = default;
};

struct RandomForestConfig {
    int n_trees = 100;
    std::optional<std::size_t> max_features;  // nullopt = floor(sqrt(feature count))
    int max_depth = 16;
    int min_leaf = 1;
    std::uint64_t seed = 0;
    bool bootstrap = true;
    friend bool operator==(const RandomForestConfig&, const RandomForestConfig&) = default;
};

struct AdaBoostConfig {
    int rounds = 50;
    friend bool operator==(const AdaBoostConfig&, const AdaBoostConfig&) = default;
};

struct GradientBoostConfig {
    int rounds = 100;
    double learning_rate = 0.1;
    int max_depth = 3;
    double reg_lambda = 1.0;
    friend bool operator==(const GradientBoostConfig&, const GradientBoostConfig&) = default;
};

using ClassifierConfig = std::variant<GaussianNBConfig, KnnConfig, LinearSvmConfig, DecisionTreeConfig,
                                      RandomForestConfig, AdaBoostConfig, GradientBoostConfig>;

// Short CLI name ("nb", "knn", ...) and display name ("Naive Bayes", ...).
std::string family_tag(const ClassifierConfig& config);
std::string family_display_name(const ClassifierConfig& config);
ClassifierConfig default_config(std::string_view tag);  // throws on unknown tag
const std::vector<std::string>& family_tags();

// Throws std::invalid_argument when a hyperparameter is out of range.
void validate_config(const ClassifierConfig& config);

nlohmann::json config_to_json(const ClassifierConfig& config);
ClassifierConfig config_from_json(const nlohmann::json& doc);
// Overlays the keys present in `overrides` onto `config`.
ClassifierConfig merge_config(const ClassifierConfig& config, const nlohmann::json& overrides);

// ---------------------------------------------------------------------------
// Fitted parameters.

struct NaiveBayesParams {
    std::array<double, 2> log_prior{};
    std::array<std::vector<double>, 2> mean;
    std::array<std::vector<double>, 2> variance;
    friend bool operator==(const NaiveBayesParams&, const NaiveBayesParams&) = default;
};

struct KnnParams {
    Matrix train;
    std::vector<int> labels;
    friend bool operator==(const KnnParams&, const KnnParams&) = default;
};

// Margin is w . ((x - center) / scale) + bias. Empty center/scale means raw inputs.
struct LinearSvmParams {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> center;
    std::vector<double> scale;
    friend bool operator==(const LinearSvmParams&, const LinearSvmParams&) = default;
};

struct DecisionTreeParams {
    Tree tree;
    friend bool operator==(const DecisionTreeParams&, const DecisionTreeParams&) = default;
};

struct RandomForestParams {
    std::vector<Tree> trees;
    friend bool operator==(const RandomForestParams&, const RandomForestParams&) = default;
};

// Stumps vote +1 (attack) when their leaf value exceeds 0.5, -1 otherwise.
struct AdaBoostParams {
    std::vector<Tree> stumps;
    std::vector<double> alphas;
    std::vector<double> errors;  // weighted training error of each stump when it was fitted
    friend bool operator==(const AdaBoostParams&, const AdaBoostParams&) = default;
};

struct GradientBoostParams {
    double initial_logit = 0.0;
    std::vector<Tree> trees;  // leaf values are unshrunk Newton weights
    std::vector<double> learning_rates;
    friend bool operator==(const GradientBoostParams&, const GradientBoostParams&) = default;
};

using ModelParams = std::variant<NaiveBayesParams, KnnParams, LinearSvmParams, DecisionTreeParams,
                                 RandomForestParams, AdaBoostParams, GradientBoostParams>;

struct TrainedModel {
    ClassifierConfig config;
    ModelParams params;
    std::vector<std::string> feature_names;
    std::size_t feature_count = 0;
    double train_seconds = 0.0;
};

class TrainingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Fits a model. Deterministic given config (including seeds) and data;
// train_seconds covers the fit alone.
TrainedModel train(const ClassifierConfig& config, const LabeledDataset& data);

// Ranking score, increasing in attack likelihood:
//   NB        log p(x, attack) - log p(x, benign)
//   KNN       attack fraction among the k nearest rows
//   SVM       signed margin
//   tree/RF   attack probability (mean over trees for RF)
//   AdaBoost  weighted vote sum
//   GBT       sigmoid of the additive logit
double predict_score(const TrainedModel& model, std::span<const double> row);

// 1 exactly when predict_score(model, row) > decision_threshold(model).
int predict_label(const TrainedModel& model, std::span<const double> row);

double decision_threshold(const TrainedModel& model);

// GBT logit before the sigmoid, optionally truncated to the first `rounds` trees.
double gradient_boost_margin(const GradientBoostParams& params, std::span<const double> row,
                             std::size_t rounds);

double adaboost_vote(const Tree& stump, std::span<const double> row);

// Training-set neighbour indices for a KNN query, nearest first, ties by index.
std::vector<std::size_t> knn_neighbors(const KnnParams& params, int k, std::span<const double> row);

nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& doc);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

// Individual family trainers; `train` dispatches to these.
namespace detail {
NaiveBayesParams fit_naive_bayes(const LabeledDataset& data);
KnnParams fit_knn(const KnnConfig& config, const LabeledDataset& data);
LinearSvmParams fit_linear_svm(const LinearSvmConfig& config, const LabeledDataset& data);
DecisionTreeParams fit_decision_tree(const DecisionTreeConfig& config, const LabeledDataset& data);
RandomForestParams fit_random_forest(const RandomForestConfig& config, const LabeledDataset& data);
AdaBoostParams fit_adaboost(const AdaBoostConfig& config, const LabeledDataset& data);
GradientBoostParams fit_gradient_boost(const GradientBoostConfig& config, const LabeledDataset& data);

double naive_bayes_score(const NaiveBayesParams& params, std::span<const double> row);
double knn_score(const KnnParams& params, int k, std::span<const double> row);
double linear_svm_score(const LinearSvmParams& params, std::span<const double> row);
}  // namespace detail

}  // namespace flowgate
