#include "commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace flowgate::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_path(const fs::path& path, const char* flag) {
    if (path.empty()) throw std::invalid_argument(std::string(flag) + " is required");
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_json(const json& doc, const fs::path& path) {
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
}

std::string hostname() {
    std::array<char, 256> buf{};
    if (gethostname(buf.data(), buf.size() - 1) != 0) return "unknown";
    return buf.data();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Labeled rows of a flow CSV after the plan's frozen transform.
struct PreparedData {
    LabelBinarization raw;
    LabeledDataset dataset;
};

PreparedData prepare(const fs::path& data, const PreprocessPlan& plan, const std::string& label_column) {
    PreparedData out;
    out.raw = binarize_labels(load_flow_csv(data), label_column);
    out.dataset = apply_plan(plan, out.raw.remaining, out.raw.labels);
    return out;
}

PlanDescriptor describe(const PreprocessPlan& plan) {
    PlanDescriptor d;
    d.correlation_threshold = plan.correlation_threshold;
    d.dropped_zero_variance = plan.dropped_zero_variance.size();
    d.dropped_low_correlation = plan.dropped_low_correlation.size();
    d.feature_count = plan.fitted_feature_order.size();
    d.fit_on_train_only = true;
    return d;
}

json tally_to_json(const std::map<std::string, std::size_t>& tally) {
    json out = json::object();
    for (const auto& [label, count] : tally) out[label] = count;
    return out;
}

bool supports_impurity(const std::string& tag) { return tag == "tree" || tag == "forest" || tag == "gbt"; }

std::vector<FeatureRanking> rank_features(const std::string& method, const LabeledDataset& data,
                                          const TrainedModel* model, std::size_t k) {
    if (method != "pearson" && method != "impurity" && method != "both") {
        throw std::invalid_argument("unknown importance method '" + method + "' (valid: pearson, impurity, both)");
    }
    std::vector<FeatureRanking> rankings;
    if (method != "impurity") rankings.push_back(top_k(label_correlations(data), k));
    if (method != "pearson" && model != nullptr) rankings.push_back(top_k(impurity_importance(*model), k));
    return rankings;
}

}  // namespace

ClassifierConfig resolve_config(const std::string& tag, std::uint64_t seed, const Overrides& file,
                                const Overrides& flags) {
    ClassifierConfig config = default_config(tag);
    if (tag == "svm" || tag == "forest") config = merge_config(config, json{{"seed", seed}});
    if (auto it = file.find(tag); it != file.end()) config = merge_config(config, it->second);
    if (auto it = flags.find(tag); it != flags.end()) config = merge_config(config, it->second);
    validate_config(config);
    return config;
}

Overrides load_overrides(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw FormatError(path.string() + ": expected an object keyed by algorithm");
    Overrides out;
    for (const auto& [tag, block] : doc.items()) {
        parse_algorithms({tag});
        if (!block.is_object()) throw FormatError(path.string() + ": block '" + tag + "' is not an object");
        out[tag] = block;
    }
    return out;
}

std::vector<std::string> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& entry : names) {
        std::stringstream ss(entry);
        std::string name;
        while (std::getline(ss, name, ',')) {
            name = to_lower(trim(name));
            if (name.empty()) continue;
            const auto& tags = family_tags();
            if (std::find(tags.begin(), tags.end(), name) == tags.end()) {
                std::string valid;
                for (const auto& t : tags) valid += (valid.empty() ? "" : ", ") + t;
                throw std::invalid_argument("unknown algorithm '" + name + "' (valid: " + valid + ")");
            }
            if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
        }
    }
    return out;
}

json compare_report_to_json(const CompareReport& report) {
    json reports = json::array();
    for (const auto& r : report.reports) reports.push_back(report_to_json(r));
    json importance = json::array();
    for (const auto& ranking : report.importance) {
        json entry = ranking_to_json(ranking);
        if (ranking.method == RankingMethod::impurity) entry["model"] = report.importance_model;
        importance.push_back(std::move(entry));
    }
    return json{
        {"report_version", 1},
        {"environment", report.environment},
        {"data", report.data},
        {"split",
         {{"train_fraction", report.split.train_fraction},
          {"seed", report.split.seed},
          {"train_rows", report.split.train_rows},
          {"test_rows", report.split.test_rows},
          {"stratified", report.split.stratified}}},
        {"plan",
         {{"correlation_threshold", report.plan.correlation_threshold},
          {"dropped_zero_variance", report.plan.dropped_zero_variance},
          {"dropped_low_correlation", report.plan.dropped_low_correlation},
          {"feature_count", report.plan.feature_count},
          {"fit_on_train_only", report.plan.fit_on_train_only}}},
        {"reports", reports},
        {"importance", importance},
    };
}

std::string render_table(const std::vector<EvalReport>& reports) {
    std::string out = "| Algorithm | Accuracy | F1-Score | Training Time |\n| --- | ---: | ---: | ---: |\n";
    for (const auto& r : reports) {
        out += "| " + r.algorithm + " | " + fixed(r.scores.accuracy, 4) + " | " + fixed(r.scores.f1, 4) + " | " +
               fixed(r.train_seconds, 3) + " s |\n";
    }
    return out;
}

void cmd_synth(const SynthOptions& options, std::ostream& log) {
    require_path(options.out, "--out");
    const SynthResult result = generate(options.spec);
    auto out = open_output(options.out);
    write_flow_csv(result.table, out);
    log << "wrote " << result.table.row_count() << " rows x " << result.table.headers.size() << " columns to "
        << options.out.string() << '\n';
}

void cmd_preprocess(const PreprocessOptions& options, std::ostream& log) {
    require_path(options.data, "--data");
    require_path(options.out_dir, "--out");
    const RawTable table = load_flow_csv(options.data);
    const LabelBinarization bin = binarize_labels(table, options.global.label_column);
    const Partition part = stratified_partition(bin.labels, options.global.train_fraction, options.global.seed);
    const RawTable train_raw = select_rows(bin.remaining, part.train);
    const PreprocessPlan plan =
        fit_plan(train_raw, select_labels(bin.labels, part.train), options.global.corr_threshold);

    fs::create_directories(options.out_dir);
    save_plan(plan, options.out_dir / "plan.json");
    save_flow_csv(select_rows(table, part.train), options.out_dir / "train.csv");
    save_flow_csv(select_rows(table, part.test), options.out_dir / "test.csv");
    log << "split " << part.train.size() << " train / " << part.test.size() << " test rows; kept "
        << plan.fitted_feature_order.size() << " features (dropped " << plan.dropped_zero_variance.size()
        << " zero-variance, " << plan.dropped_low_correlation.size() << " low-correlation)\n";
}

void cmd_train(const TrainOptions& options, std::ostream& log) {
    require_path(options.data, "--data");
    require_path(options.plan, "--plan");
    require_path(options.out, "--out");
    const std::string tag = parse_algorithms({options.algorithm}).at(0);
    const ClassifierConfig config =
        resolve_config(tag, options.global.seed, options.file_overrides, options.flag_overrides);
    const PreprocessPlan plan = load_plan(options.plan);
    const PreparedData data = prepare(options.data, plan, options.global.label_column);
    const TrainedModel model = train(config, data.dataset);
    save_model(model, options.out);
    log << family_display_name(config) << " trained on " << data.dataset.size() << " rows in "
        << fixed(model.train_seconds, 3) << " s\n";
}

EvalReport cmd_evaluate(const EvaluateOptions& options, std::ostream& log) {
    require_path(options.data, "--data");
    require_path(options.plan, "--plan");
    require_path(options.model, "--model");
    require_path(options.out, "--out");
    const PreprocessPlan plan = load_plan(options.plan);
    const TrainedModel model = load_model(options.model);
    if (model.feature_names != plan.fitted_feature_order) {
        throw std::invalid_argument("model features do not match the plan's feature order; the model was trained "
                                    "on different columns");
    }
    const PreparedData data = prepare(options.data, plan, options.global.label_column);

    SplitDescriptor split;
    split.train_fraction = options.global.train_fraction;
    split.seed = options.global.seed;
    split.train_rows = plan.fit_rows;
    split.test_rows = data.raw.labels.size();
    const EvalReport report = evaluate(model, data.dataset, split, describe(plan));
    write_json(report_to_json(report), options.out);
    if (options.roc_out) {
        auto out = open_output(*options.roc_out);
        write_roc_csv(report.roc, out);
    }
    log << report.algorithm << ": accuracy " << fixed(report.scores.accuracy, 4) << ", f1 "
        << fixed(report.scores.f1, 4) << ", auc " << fixed(report.roc.auc, 4) << '\n';
    return report;
}

CompareReport cmd_compare(const CompareOptions& options, std::ostream& log) {
    require_path(options.data, "--data");
    require_path(options.out_dir, "--out");
    const std::vector<std::string> tags = parse_algorithms(options.algorithms);
    if (tags.empty()) throw std::invalid_argument("--algos must name at least one algorithm");
    std::vector<ClassifierConfig> configs;
    for (const auto& tag : tags) {
        configs.push_back(resolve_config(tag, options.global.seed, options.file_overrides, options.flag_overrides));
    }

    const GlobalOptions& g = options.global;
    const LabelBinarization bin = binarize_labels(load_flow_csv(options.data), g.label_column);
    const Partition part = stratified_partition(bin.labels, g.train_fraction, g.seed);
    const RawTable train_raw = select_rows(bin.remaining, part.train);
    const RawTable test_raw = select_rows(bin.remaining, part.test);
    const std::vector<int> train_labels = select_labels(bin.labels, part.train);
    const std::vector<int> test_labels = select_labels(bin.labels, part.test);
    const PreprocessPlan plan = fit_plan(train_raw, train_labels, g.corr_threshold);
    const LabeledDataset train_ds = apply_plan(plan, train_raw, train_labels);
    const LabeledDataset test_ds = apply_plan(plan, test_raw, test_labels);

    CompareReport report;
    report.environment = {{"host", hostname()}, {"timestamp", utc_timestamp()}, {"tool_version", kVersion}};
    report.data = {{"source", options.data.filename().string()},
                   {"rows", bin.labels.size()},
                   {"label_column", g.label_column},
                   {"label_tally", tally_to_json(bin.tally)}};
    report.split = {g.train_fraction, g.seed, part.train.size(), part.test.size(), true};
    report.plan = describe(plan);

    fs::create_directories(options.out_dir);
    std::optional<TrainedModel> impurity_model;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        TrainedModel model = train(configs[i], train_ds);
        EvalReport eval = evaluate(model, test_ds, report.split, report.plan);
        auto roc = open_output(options.out_dir / ("roc_" + tags[i] + ".csv"));
        write_roc_csv(eval.roc, roc);
        log << eval.algorithm << ": accuracy " << fixed(eval.scores.accuracy, 4) << ", f1 "
            << fixed(eval.scores.f1, 4) << ", train " << fixed(eval.train_seconds, 3) << " s\n";
        report.reports.push_back(std::move(eval));
        if (!impurity_model && supports_impurity(tags[i])) {
            report.importance_model = tags[i];
            impurity_model = std::move(model);
        }
    }

    report.importance =
        rank_features("both", train_ds, impurity_model ? &*impurity_model : nullptr, options.top_k);

    write_json(compare_report_to_json(report), options.out_dir / "report.json");
    auto table = open_output(options.out_dir / "table.md");
    table << render_table(report.reports);
    auto importance = open_output(options.out_dir / "importance.csv");
    write_ranking_csv(report.importance, importance);
    log << "wrote report.json, table.md, importance.csv and " << tags.size() << " ROC file(s) to "
        << options.out_dir.string() << '\n';
    return report;
}

std::vector<FeatureRanking> cmd_importance(const ImportanceOptions& options, std::ostream& log) {
    require_path(options.data, "--data");
    require_path(options.plan, "--plan");
    require_path(options.out, "--out");
    const PreprocessPlan plan = load_plan(options.plan);
    const PreparedData data = prepare(options.data, plan, options.global.label_column);

    std::optional<TrainedModel> model;
    if (options.method != "pearson") {
        if (options.model) {
            model = load_model(*options.model);
            if (model->feature_names != plan.fitted_feature_order) {
                throw std::invalid_argument("model features do not match the plan's feature order");
            }
        } else {
            const std::string tag = parse_algorithms({options.algorithm}).at(0);
            model = train(resolve_config(tag, options.global.seed, options.file_overrides, options.flag_overrides),
                          data.dataset);
        }
    }
    const auto rankings = rank_features(options.method, data.dataset, model ? &*model : nullptr, options.top_k);
    auto out = open_output(options.out);
    write_ranking_csv(rankings, out);
    for (const auto& ranking : rankings) {
        log << method_name(ranking.method) << ':';
        for (const auto& entry : ranking.entries) log << ' ' << entry.feature;
        log << '\n';
    }
    return rankings;
}

}  // namespace flowgate::cli
