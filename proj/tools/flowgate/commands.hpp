#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowgate/flowgate.hpp"

namespace flowgate::cli {

struct GlobalOptions {
    std::uint64_t seed = 1;
    std::string label_column = "Label";
    double train_fraction = 0.8;
    double corr_threshold = kDefaultCorrelationThreshold;
};

// Hyperparameter overrides keyed by family tag, e.g. {"knn": {"k": 7}}.
using Overrides = std::map<std::string, nlohmann::json>;

// Default config for `tag`, seeded from the global seed, then overlaid with
// the config-file block and finally the flag block for that family.
ClassifierConfig resolve_config(const std::string& tag, std::uint64_t seed, const Overrides& file,
                                const Overrides& flags);

// Reads a hyperparameter config file: an object keyed by family tag.
Overrides load_overrides(const std::filesystem::path& path);

// Splits "a,b,c" and checks every name against the family tags.
std::vector<std::string> parse_algorithms(const std::vector<std::string>& names);

struct SynthOptions {
    SynthSpec spec;
    std::filesystem::path out;
};

struct PreprocessOptions {
    GlobalOptions global;
    std::filesystem::path data;
    std::filesystem::path out_dir;  // receives plan.json, train.csv, test.csv
};

struct TrainOptions {
    GlobalOptions global;
    std::filesystem::path data;
    std::filesystem::path plan;
    std::string algorithm;
    Overrides file_overrides;
    Overrides flag_overrides;
    std::filesystem::path out;
};

struct EvaluateOptions {
    GlobalOptions global;
    std::filesystem::path data;
    std::filesystem::path plan;
    std::filesystem::path model;
    std::filesystem::path out;  // EvalReport JSON
    std::optional<std::filesystem::path> roc_out;
};

struct CompareOptions {
    GlobalOptions global;
    std::filesystem::path data;
    std::vector<std::string> algorithms;
    Overrides file_overrides;
    Overrides flag_overrides;
    std::filesystem::path out_dir;
    std::size_t top_k = kDefaultTopK;
};

struct ImportanceOptions {
    GlobalOptions global;
    std::filesystem::path data;
    std::filesystem::path plan;
    std::optional<std::filesystem::path> model;  // trained on `data` with `algorithm` when absent
    std::string algorithm = "gbt";
    std::string method = "both";  // pearson, impurity or both
    std::size_t top_k = kDefaultTopK;
    Overrides file_overrides;
    Overrides flag_overrides;
    std::filesystem::path out;  // CSV
};

struct CompareReport {
    nlohmann::json environment;
    nlohmann::json data;
    SplitDescriptor split;
    PlanDescriptor plan;
    std::vector<EvalReport> reports;  // in --algos order
    std::vector<FeatureRanking> importance;
    std::string importance_model;  // tag of the model behind the impurity ranking, if any
};

nlohmann::json compare_report_to_json(const CompareReport& report);
std::string render_table(const std::vector<EvalReport>& reports);

// Each command writes its outputs to files and a short summary to `log`.
// Errors surface as exceptions.
void cmd_synth(const SynthOptions& options, std::ostream& log);
void cmd_preprocess(const PreprocessOptions& options, std::ostream& log);
void cmd_train(const TrainOptions& options, std::ostream& log);
EvalReport cmd_evaluate(const EvaluateOptions& options, std::ostream& log);
CompareReport cmd_compare(const CompareOptions& options, std::ostream& log);
std::vector<FeatureRanking> cmd_importance(const ImportanceOptions& options, std::ostream& log);

}  // namespace flowgate::cli
