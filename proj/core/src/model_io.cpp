#include <fstream>

#include "flowgate/learners.hpp"

namespace flowgate {
namespace {

using json = nlohmann::json;

json tree_to_json(const Tree& tree) {
    json feature = json::array();
    json threshold = json::array();
    json left = json::array();
    json right = json::array();
    json value = json::array();
    json cover = json::array();
    json gain = json::array();
    for (const auto& n : tree.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
        cover.push_back(n.cover);
        gain.push_back(n.gain);
    }
    return json{{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
                {"value", value},     {"cover", cover},         {"gain", gain}};
}

Tree tree_from_json(const json& doc, std::size_t feature_count) {
    const auto feature = doc.at("feature").get<std::vector<int>>();
    const auto threshold = doc.at("threshold").get<std::vector<double>>();
    const auto left = doc.at("left").get<std::vector<int>>();
    const auto right = doc.at("right").get<std::vector<int>>();
    const auto value = doc.at("value").get<std::vector<double>>();
    const auto cover = doc.at("cover").get<std::vector<double>>();
    const auto gain = doc.at("gain").get<std::vector<double>>();
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n || cover.size() != n ||
        gain.size() != n) {
        throw FormatError("tree node arrays differ in length");
    }
    Tree tree;
    tree.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (feature[i] >= static_cast<int>(feature_count)) throw FormatError("tree splits on an unknown feature");
        tree.nodes[i] = TreeNode{feature[i], threshold[i], left[i], right[i], value[i], cover[i], gain[i]};
    }
    if (!tree.well_formed()) throw FormatError("tree node array is not a well-formed binary tree");
    return tree;
}

json trees_to_json(const std::vector<Tree>& trees) {
    json out = json::array();
    for (const auto& t : trees) out.push_back(tree_to_json(t));
    return out;
}

std::vector<Tree> trees_from_json(const json& doc, std::size_t feature_count) {
    std::vector<Tree> out;
    for (const auto& t : doc) out.push_back(tree_from_json(t, feature_count));
    return out;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json params_to_json(const ModelParams& params) {
    return std::visit(
        Overloaded{
            [](const NaiveBayesParams& p) {
                return json{{"log_prior", p.log_prior},
                            {"mean", {p.mean[0], p.mean[1]}},
                            {"variance", {p.variance[0], p.variance[1]}}};
            },
            [](const KnnParams& p) {
                return json{{"rows", p.train.rows()},
                            {"cols", p.train.cols()},
                            {"train", p.train.data()},
                            {"labels", p.labels}};
            },
            [](const LinearSvmParams& p) {
                return json{{"weights", p.weights}, {"bias", p.bias}, {"center", p.center}, {"scale", p.scale}};
            },
            [](const DecisionTreeParams& p) { return json{{"tree", tree_to_json(p.tree)}}; },
            [](const RandomForestParams& p) { return json{{"trees", trees_to_json(p.trees)}}; },
            [](const AdaBoostParams& p) {
                return json{{"stumps", trees_to_json(p.stumps)}, {"alphas", p.alphas}, {"errors", p.errors}};
            },
            [](const GradientBoostParams& p) {
                return json{{"initial_logit", p.initial_logit},
                            {"trees", trees_to_json(p.trees)},
                            {"learning_rates", p.learning_rates}};
            },
        },
        params);
}

void check_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) throw FormatError(std::string(what) + " has the wrong length");
}

ModelParams params_from_json(const ClassifierConfig& config, const json& doc, std::size_t d) {
    switch (config.index()) {
        case 0: {
            NaiveBayesParams p;
            p.log_prior = doc.at("log_prior").get<std::array<double, 2>>();
            for (int c : {0, 1}) {
                p.mean[c] = doc.at("mean").at(c).get<std::vector<double>>();
                p.variance[c] = doc.at("variance").at(c).get<std::vector<double>>();
                check_length(p.mean[c].size(), d, "naive bayes mean");
                check_length(p.variance[c].size(), d, "naive bayes variance");
            }
            return p;
        }
        case 1: {
            const auto rows = doc.at("rows").get<std::size_t>();
            check_length(doc.at("cols").get<std::size_t>(), d, "knn training matrix");
            KnnParams p{Matrix(rows, d, doc.at("train").get<std::vector<double>>()),
                        doc.at("labels").get<std::vector<int>>()};
            check_length(p.labels.size(), rows, "knn labels");
            return p;
        }
        case 2: {
            LinearSvmParams p{doc.at("weights").get<std::vector<double>>(), doc.at("bias").get<double>(),
                              doc.at("center").get<std::vector<double>>(), doc.at("scale").get<std::vector<double>>()};
            check_length(p.weights.size(), d, "svm weights");
            if (!p.center.empty()) {
                check_length(p.center.size(), d, "svm center");
                check_length(p.scale.size(), d, "svm scale");
            }
            return p;
        }
        case 3: return DecisionTreeParams{tree_from_json(doc.at("tree"), d)};
        case 4: return RandomForestParams{trees_from_json(doc.at("trees"), d)};
        case 5: {
            AdaBoostParams p{trees_from_json(doc.at("stumps"), d), doc.at("alphas").get<std::vector<double>>(),
                             doc.at("errors").get<std::vector<double>>()};
            check_length(p.alphas.size(), p.stumps.size(), "adaboost alphas");
            for (double a : p.alphas) {
                if (!(a > 0.0)) throw FormatError("adaboost alpha must be positive");
            }
            return p;
        }
        default: {
            GradientBoostParams p{doc.at("initial_logit").get<double>(), trees_from_json(doc.at("trees"), d),
                                  doc.at("learning_rates").get<std::vector<double>>()};
            check_length(p.learning_rates.size(), p.trees.size(), "gbt learning rates");
            return p;
        }
    }
}

}  // namespace

json model_to_json(const TrainedModel& model) {
    const json hyper = config_to_json(model.config);
    return json{
        {"model_version", kModelVersion},
        {"family", family_tag(model.config)},
        {"training",
         {{"seed", hyper.contains("seed") ? hyper.at("seed") : json(nullptr)},
          {"hyperparameters", hyper},
          {"feature_names", model.feature_names},
          {"feature_count", model.feature_count},
          {"train_seconds", model.train_seconds}}},
        {"parameters", params_to_json(model.params)},
    };
}

TrainedModel model_from_json(const json& doc) {
    try {
        const int version = doc.at("model_version").get<int>();
        if (version != kModelVersion) throw FormatError("unsupported model_version " + std::to_string(version));
        const auto& training = doc.at("training");
        TrainedModel model;
        model.config = config_from_json(training.at("hyperparameters"));
        if (family_tag(model.config) != doc.at("family").get<std::string>()) {
            throw FormatError("family tag disagrees with hyperparameters");
        }
        model.feature_names = training.at("feature_names").get<std::vector<std::string>>();
        model.feature_count = training.at("feature_count").get<std::size_t>();
        check_length(model.feature_names.size(), model.feature_count, "feature_names");
        model.train_seconds = training.at("train_seconds").get<double>();
        model.params = params_from_json(model.config, doc.at("parameters"), model.feature_count);
        return model;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << model_to_json(model).dump() << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return model_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace flowgate
