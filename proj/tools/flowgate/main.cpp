#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using flowgate::cli::Overrides;

// Per-family hyperparameter flags; values land in `flags[tag][key]`.
void add_hyperparameter_flags(CLI::App& app, Overrides& flags) {
    auto int_flag = [&](const char* name, const char* tag, const char* key, const char* help) {
        app.add_option_function<int>(name, [&flags, tag, key](const int& v) { flags[tag][key] = v; }, help);
    };
    auto real_flag = [&](const char* name, const char* tag, const char* key, const char* help) {
        app.add_option_function<double>(name, [&flags, tag, key](const double& v) { flags[tag][key] = v; }, help);
    };
    int_flag("--knn-k", "knn", "k", "KNN neighbour count (odd)");
    real_flag("--svm-lambda", "svm", "reg_lambda", "Linear SVM regularisation strength");
    int_flag("--svm-epochs", "svm", "epochs", "Linear SVM passes over the data");
    int_flag("--tree-max-depth", "tree", "max_depth", "Decision tree depth limit");
    int_flag("--tree-min-leaf", "tree", "min_leaf", "Decision tree minimum rows per leaf");
    int_flag("--forest-trees", "forest", "n_trees", "Random forest size");
    int_flag("--forest-max-features", "forest", "max_features", "Features sampled per split");
    int_flag("--forest-max-depth", "forest", "max_depth", "Random forest depth limit");
    int_flag("--forest-min-leaf", "forest", "min_leaf", "Random forest minimum rows per leaf");
    int_flag("--ada-rounds", "ada", "rounds", "AdaBoost stump count");
    int_flag("--gbt-rounds", "gbt", "rounds", "Gradient boosting rounds");
    real_flag("--gbt-learning-rate", "gbt", "learning_rate", "Gradient boosting shrinkage");
    int_flag("--gbt-max-depth", "gbt", "max_depth", "Gradient boosting tree depth");
    real_flag("--gbt-lambda", "gbt", "reg_lambda", "Gradient boosting L2 leaf penalty");
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = flowgate::cli;
    CLI::App app{"flowgate: DDoS flow classification pipeline"};
    app.set_version_flag("--version", flowgate::kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    cli::GlobalOptions global;
    std::string out;
    app.add_option("--seed", global.seed, "Random seed for splitting, sampling and synthesis");
    app.add_option("--out", out, "Output file or directory");
    app.add_option("--label-column", global.label_column, "Name of the label column")->capture_default_str();
    app.add_option("--train-fraction", global.train_fraction, "Training share of each class")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--corr-threshold", global.corr_threshold, "Minimum |r| with the label to keep a feature")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    std::string data, plan, model, config_file, roc_out;
    Overrides flag_overrides;

    cli::SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic flow CSV");
    synth_cmd->add_option("--benign", synth.spec.n_benign, "Benign rows")->capture_default_str();
    synth_cmd->add_option("--attack", synth.spec.n_attack, "Attack rows")->capture_default_str();
    synth_cmd->add_option("--features", synth.spec.n_numeric_features, "Informative numeric features")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--sep", synth.spec.class_separation, "Distance between class means in standard deviations")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_cmd->add_option("--null-rate", synth.spec.null_rate, "Share of numeric cells left empty or NaN")
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--inf-rate", synth.spec.inf_rate, "Share of numeric cells set to infinity")
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--constant", synth.spec.n_constant_columns, "Constant columns");
    synth_cmd->add_option("--noise", synth.spec.n_noise_columns, "Label-independent noise columns");
    synth_cmd->add_option("--categorical", synth.spec.n_categorical_columns, "Categorical columns");
    synth_cmd->add_option("--correlation", synth.spec.feature_correlation,
                          "Within-class correlation between informative features")
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--attack-modes", synth.spec.attack_modes, "1 or 2 attack clusters")
        ->check(CLI::IsMember({1, 2}));
    synth_cmd->add_option("--scale-ratio", synth.spec.scale_ratio, "Scale growth factor across informative features")
        ->check(CLI::Range(1.0, 1e12));
    synth_cmd->add_option("--separation-decay", synth.spec.separation_decay,
                          "Geometric decay of class separation across informative features")
        ->check(CLI::Range(1e-6, 1.0));
    bool raw_noise = false;
    synth_cmd->add_flag("--raw-noise", raw_noise, "Skip per-class re-centring of noise columns");

    auto* preprocess_cmd = app.add_subcommand("preprocess", "Split a flow CSV and fit the preprocessing plan");
    preprocess_cmd->add_option("--data", data, "Input flow CSV")->required()->check(CLI::ExistingFile);

    auto* train_cmd = app.add_subcommand("train", "Train one classifier on preprocessed data");
    std::string algo;
    train_cmd->add_option("--data", data, "Training flow CSV")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--plan", plan, "Plan JSON from preprocess")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--algo", algo, "Algorithm tag")->required();
    train_cmd->add_option("--config", config_file, "Hyperparameter JSON keyed by algorithm")
        ->check(CLI::ExistingFile);
    add_hyperparameter_flags(*train_cmd, flag_overrides);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a trained model on a flow CSV");
    evaluate_cmd->add_option("--data", data, "Test flow CSV")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--plan", plan, "Plan JSON from preprocess")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--model", model, "Model JSON from train")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--roc", roc_out, "Optional ROC points CSV");

    auto* compare_cmd = app.add_subcommand("compare", "Run the full pipeline for several algorithms");
    std::vector<std::string> algos;
    std::size_t top_k = flowgate::kDefaultTopK;
    compare_cmd->add_option("--data", data, "Input flow CSV")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--algos", algos, "Comma-separated algorithm tags")->required()->delimiter(',');
    compare_cmd->add_option("--top-k", top_k, "Features per importance ranking")->capture_default_str();
    compare_cmd->add_option("--config", config_file, "Hyperparameter JSON keyed by algorithm")
        ->check(CLI::ExistingFile);
    add_hyperparameter_flags(*compare_cmd, flag_overrides);

    auto* importance_cmd = app.add_subcommand("importance", "Rank features by label correlation and impurity");
    std::string method = "both";
    importance_cmd->add_option("--data", data, "Flow CSV")->required()->check(CLI::ExistingFile);
    importance_cmd->add_option("--plan", plan, "Plan JSON from preprocess")->required()->check(CLI::ExistingFile);
    importance_cmd->add_option("--model", model, "Tree, forest or gbt model JSON")->check(CLI::ExistingFile);
    importance_cmd->add_option("--algo", algo, "Model trained in place when --model is absent (default gbt)");
    importance_cmd->add_option("--method", method, "pearson, impurity or both")
        ->check(CLI::IsMember({"pearson", "impurity", "both"}))
        ->capture_default_str();
    importance_cmd->add_option("--top-k", top_k, "Features per ranking")->capture_default_str();
    importance_cmd->add_option("--config", config_file, "Hyperparameter JSON keyed by algorithm")
        ->check(CLI::ExistingFile);
    add_hyperparameter_flags(*importance_cmd, flag_overrides);

    CLI11_PARSE(app, argc, argv);

    try {
        const Overrides file_overrides = config_file.empty() ? Overrides{} : cli::load_overrides(config_file);
        if (synth_cmd->parsed()) {
            synth.spec.seed = global.seed;
            synth.spec.decorrelate_noise = !raw_noise;
            synth.out = out;
            cli::cmd_synth(synth, std::cout);
        } else if (preprocess_cmd->parsed()) {
            cli::cmd_preprocess({global, data, out}, std::cout);
        } else if (train_cmd->parsed()) {
            cli::cmd_train({global, data, plan, algo, file_overrides, flag_overrides, out}, std::cout);
        } else if (evaluate_cmd->parsed()) {
            cli::EvaluateOptions options{global, data, plan, model, out, std::nullopt};
            if (!roc_out.empty()) options.roc_out = roc_out;
            cli::cmd_evaluate(options, std::cout);
        } else if (compare_cmd->parsed()) {
            cli::cmd_compare({global, data, algos, file_overrides, flag_overrides, out, top_k}, std::cout);
        } else if (importance_cmd->parsed()) {
            cli::ImportanceOptions options;
            options.global = global;
            options.data = data;
            options.plan = plan;
            if (!model.empty()) options.model = model;
            if (!algo.empty()) options.algorithm = algo;
            options.method = method;
            options.top_k = top_k;
            options.file_overrides = file_overrides;
            options.flag_overrides = flag_overrides;
            options.out = out;
            cli::cmd_importance(options, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
