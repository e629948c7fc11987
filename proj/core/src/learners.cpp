#include <algorithm>
#include <cmath>

#include "flowgate/learners.hpp"
#include "flowgate/metrics.hpp"

namespace flowgate {
namespace {

using json = nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

void require_both_classes(const LabeledDataset& data, const std::string& family) {
    const auto attacks = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), kAttack));
    if (attacks == 0) throw TrainingError(family + " needs both classes; training data has no attack rows");
    if (attacks == data.labels.size()) {
        throw TrainingError(family + " needs both classes; training data has no benign rows");
    }
}

}  // namespace

const std::vector<std::string>& family_tags() {
    static const std::vector<std::string> tags{"nb", "knn", "svm", "tree", "forest", "ada", "gbt"};
    return tags;
}

std::string family_tag(const ClassifierConfig& config) {
    return family_tags()[config.index()];
}

std::string family_display_name(const ClassifierConfig& config) {
    static const char* names[] = {"Naive Bayes", "KNN", "SVM", "Decision Tree", "Random Forest", "AdaBoost",
                                  "GradientBoost"};
    return names[config.index()];
}

ClassifierConfig default_config(std::string_view tag) {
    if (tag == "nb") return GaussianNBConfig{};
    if (tag == "knn") return KnnConfig{};
    if (tag == "svm") return LinearSvmConfig{};
    if (tag == "tree") return DecisionTreeConfig{};
    if (tag == "forest") return RandomForestConfig{};
    if (tag == "ada") return AdaBoostConfig{};
    if (tag == "gbt") return GradientBoostConfig{};
    std::string valid;
    for (const auto& t : family_tags()) valid += (valid.empty() ? "" : ", ") + t;
    throw std::invalid_argument("unknown algorithm '" + std::string(tag) + "' (valid: " + valid + ")");
}

void validate_config(const ClassifierConfig& config) {
    std::visit(Overloaded{
                   [](const GaussianNBConfig&) {},
                   [](const KnnConfig& c) {
                       require(c.k > 0 && c.k % 2 == 1, "knn: k must be a positive odd integer");
                   },
                   [](const LinearSvmConfig& c) {
                       require(c.reg_lambda > 0.0 && std::isfinite(c.reg_lambda), "svm: reg_lambda must be > 0");
                       require(c.epochs > 0, "svm: epochs must be positive");
                   },
                   [](const DecisionTreeConfig& c) {
                       require(c.max_depth > 0, "tree: max_depth must be positive");
                       require(c.min_leaf > 0, "tree: min_leaf must be positive");
                   },
                   [](const RandomForestConfig& c) {
                       require(c.n_trees > 0, "forest: n_trees must be positive");
                       require(!c.max_features || *c.max_features > 0, "forest: max_features must be positive");
                       require(c.max_depth > 0, "forest: max_depth must be positive");
                       require(c.min_leaf > 0, "forest: min_leaf must be positive");
                   },
                   [](const AdaBoostConfig& c) { require(c.rounds > 0, "ada: rounds must be positive"); },
                   [](const GradientBoostConfig& c) {
                       require(c.rounds > 0, "gbt: rounds must be positive");
                       require(c.learning_rate > 0.0 && c.learning_rate <= 1.0,
                               "gbt: learning_rate must lie in (0, 1]");
                       require(c.max_depth > 0, "gbt: max_depth must be positive");
                       require(c.reg_lambda >= 0.0 && std::isfinite(c.reg_lambda), "gbt: reg_lambda must be >= 0");
                   },
               },
               config);
}

json config_to_json(const ClassifierConfig& config) {
    json out = std::visit(
        Overloaded{
            [](const GaussianNBConfig&) { return json::object(); },
            [](const KnnConfig& c) { return json{{"k", c.k}}; },
            [](const LinearSvmConfig& c) {
                return json{{"reg_lambda", c.reg_lambda}, {"epochs", c.epochs}, {"seed", c.seed}};
            },
            [](const DecisionTreeConfig& c) { return json{{"max_depth", c.max_depth}, {"min_leaf", c.min_leaf}}; },
            [](const RandomForestConfig& c) {
                return json{{"n_trees", c.n_trees},
                            {"max_features", c.max_features ? json(*c.max_features) : json("sqrt")},
                            {"max_depth", c.max_depth},
                            {"min_leaf", c.min_leaf},
                            {"seed", c.seed},
                            {"bootstrap", c.bootstrap}};
            },
            [](const AdaBoostConfig& c) { return json{{"rounds", c.rounds}}; },
            [](const GradientBoostConfig& c) {
                return json{{"rounds", c.rounds},
                            {"learning_rate", c.learning_rate},
                            {"max_depth", c.max_depth},
                            {"reg_lambda", c.reg_lambda}};
            },
        },
        config);
    out["family"] = family_tag(config);
    return out;
}

ClassifierConfig config_from_json(const json& doc) {
    try {
        ClassifierConfig config = default_config(doc.at("family").get<std::string>());
        std::visit(Overloaded{
                       [&](GaussianNBConfig&) {},
                       [&](KnnConfig& c) { c.k = doc.value("k", c.k); },
                       [&](LinearSvmConfig& c) {
                           c.reg_lambda = doc.value("reg_lambda", c.reg_lambda);
                           c.epochs = doc.value("epochs", c.epochs);
                           c.seed = doc.value("seed", c.seed);
                       },
                       [&](DecisionTreeConfig& c) {
                           c.max_depth = doc.value("max_depth", c.max_depth);
                           c.min_leaf = doc.value("min_leaf", c.min_leaf);
                       },
                       [&](RandomForestConfig& c) {
                           c.n_trees = doc.value("n_trees", c.n_trees);
                           if (doc.contains("max_features")) {
                               const auto& mf = doc.at("max_features");
                               if (mf.is_string()) {
                                   if (mf.get<std::string>() != "sqrt") {
                                       throw std::invalid_argument("forest: max_features must be \"sqrt\" or a count");
                                   }
                                   c.max_features.reset();
                               } else {
                                   c.max_features = mf.get<std::size_t>();
                               }
                           }
                           c.max_depth = doc.value("max_depth", c.max_depth);
                           c.min_leaf = doc.value("min_leaf", c.min_leaf);
                           c.seed = doc.value("seed", c.seed);
                           c.bootstrap = doc.value("bootstrap", c.bootstrap);
                       },
                       [&](AdaBoostConfig& c) { c.rounds = doc.value("rounds", c.rounds); },
                       [&](GradientBoostConfig& c) {
                           c.rounds = doc.value("rounds", c.rounds);
                           c.learning_rate = doc.value("learning_rate", c.learning_rate);
                           c.max_depth = doc.value("max_depth", c.max_depth);
                           c.reg_lambda = doc.value("reg_lambda", c.reg_lambda);
                       },
                   },
                   config);
        validate_config(config);
        return config;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed classifier config: ") + e.what());
    }
}

ClassifierConfig merge_config(const ClassifierConfig& config, const json& overrides) {
    json doc = config_to_json(config);
    for (const auto& [key, value] : overrides.items()) {
        if (key == "family") continue;
        if (!doc.contains(key)) {
            throw std::invalid_argument("unknown hyperparameter '" + key + "' for " + family_tag(config));
        }
        doc[key] = value;
    }
    return config_from_json(doc);
}

TrainedModel train(const ClassifierConfig& config, const LabeledDataset& data) {
    validate_config(config);
    data.validate();
    if (data.size() == 0) throw TrainingError("cannot train on an empty dataset");

    TrainedModel model;
    model.config = config;
    model.feature_names = data.feature_names;
    model.feature_count = data.feature_count();

    auto timed = time_fit([&]() -> ModelParams {
        return std::visit(Overloaded{
                              [&](const GaussianNBConfig&) -> ModelParams {
                                  require_both_classes(data, "naive bayes");
                                  return detail::fit_naive_bayes(data);
                              },
                              [&](const KnnConfig& c) -> ModelParams {
                                  if (static_cast<std::size_t>(c.k) > data.size()) {
                                      throw TrainingError("knn: k=" + std::to_string(c.k) + " exceeds " +
                                                          std::to_string(data.size()) + " training rows");
                                  }
                                  return detail::fit_knn(c, data);
                              },
                              [&](const LinearSvmConfig& c) -> ModelParams {
                                  require_both_classes(data, "svm");
                                  return detail::fit_linear_svm(c, data);
                              },
                              [&](const DecisionTreeConfig& c) -> ModelParams {
                                  return detail::fit_decision_tree(c, data);
                              },
                              [&](const RandomForestConfig& c) -> ModelParams {
                                  return detail::fit_random_forest(c, data);
                              },
                              [&](const AdaBoostConfig& c) -> ModelParams {
                                  require_both_classes(data, "adaboost");
                                  return detail::fit_adaboost(c, data);
                              },
                              [&](const GradientBoostConfig& c) -> ModelParams {
                                  require_both_classes(data, "gradient boosting");
                                  return detail::fit_gradient_boost(c, data);
                              },
                          },
                          config);
    });
    model.params = std::move(timed.result);
    model.train_seconds = timed.seconds;
    return model;
}

double adaboost_vote(const Tree& stump, std::span<const double> row) {
    return stump.predict(row) > 0.5 ? 1.0 : -1.0;
}

double gradient_boost_margin(const GradientBoostParams& params, std::span<const double> row, std::size_t rounds) {
    double margin = params.initial_logit;
    const std::size_t n = std::min(rounds, params.trees.size());
    for (std::size_t t = 0; t < n; ++t) margin += params.learning_rates[t] * params.trees[t].predict(row);
    return margin;
}

double predict_score(const TrainedModel& model, std::span<const double> row) {
    if (row.size() != model.feature_count) {
        throw std::invalid_argument("row has " + std::to_string(row.size()) + " features; model expects " +
                                    std::to_string(model.feature_count));
    }
    return std::visit(
        Overloaded{
            [&](const NaiveBayesParams& p) { return detail::naive_bayes_score(p, row); },
            [&](const KnnParams& p) { return detail::knn_score(p, std::get<KnnConfig>(model.config).k, row); },
            [&](const LinearSvmParams& p) { return detail::linear_svm_score(p, row); },
            [&](const DecisionTreeParams& p) { return p.tree.predict(row); },
            [&](const RandomForestParams& p) {
                double sum = 0.0;
                for (const auto& t : p.trees) sum += t.predict(row);
                return sum / static_cast<double>(p.trees.size());
            },
            [&](const AdaBoostParams& p) {
                double vote = 0.0;
                for (std::size_t t = 0; t < p.stumps.size(); ++t) vote += p.alphas[t] * adaboost_vote(p.stumps[t], row);
                return vote;
            },
            [&](const GradientBoostParams& p) {
                const double margin = gradient_boost_margin(p, row, p.trees.size());
                return 1.0 / (1.0 + std::exp(-margin));
            },
        },
        model.params);
}

double decision_threshold(const TrainedModel& model) {
    switch (model.params.index()) {
        case 0:  // naive bayes: log-posterior difference
        case 2:  // svm margin
        case 5:  // adaboost vote
            return 0.0;
        default:
            return 0.5;
    }
}

int predict_label(const TrainedModel& model, std::span<const double> row) {
    return predict_score(model, row) > decision_threshold(model) ? kAttack : kBenign;
}

}  // namespace flowgate
