#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "flowgate/metrics.hpp"
#include "flowgate/parallel.hpp"

namespace flowgate {
namespace {

using json = nlohmann::json;

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw std::invalid_argument("confusion: length mismatch (" + std::to_string(y_true.size()) + " vs " +
                                    std::to_string(y_pred.size()) + ")");
    }
    if (y_true.empty()) throw std::invalid_argument("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool actual = y_true[i] == kAttack;
        const bool predicted = y_pred[i] == kAttack;
        if (actual && predicted) ++cm.tp;
        else if (actual) ++cm.fn;
        else if (predicted) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

ClassificationScores classification_scores(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::invalid_argument("classification_scores: empty confusion matrix");
    ClassificationScores s;
    s.accuracy = ratio(cm.tp + cm.tn, cm.total());
    s.precision = ratio(cm.tp, cm.tp + cm.fp);
    s.recall = ratio(cm.tp, cm.tp + cm.fn);
    const double denom = s.precision + s.recall;
    s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
    return s;
}

double trapezoid_area(std::span<const RocPoint> points) {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
    }
    return area;
}

RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) throw std::invalid_argument("roc_curve: length mismatch");
    std::vector<std::pair<double, int>> ranked(y_true.size());
    std::size_t positives = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (std::isnan(scores[i])) throw std::invalid_argument("roc_curve: NaN score");
        ranked[i] = {scores[i], y_true[i]};
        positives += y_true[i] == kAttack ? 1 : 0;
    }
    const std::size_t negatives = y_true.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw std::invalid_argument("roc_curve: both classes must be present (FPR or TPR undefined)");
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve roc;
    roc.points.push_back({0.0, 0.0});
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < ranked.size();) {
        const double threshold = ranked[i].first;
        for (; i < ranked.size() && ranked[i].first == threshold; ++i) {
            (ranked[i].second == kAttack ? tp : fp) += 1;
        }
        roc.points.push_back({ratio(fp, negatives), ratio(tp, positives)});
    }
    roc.auc = trapezoid_area(roc.points);
    return roc;
}

void write_roc_csv(const RocCurve& roc, std::ostream& out) {
    out << "fpr,tpr\n";
    for (const auto& p : roc.points) out << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
}

Predictions predict_all(const TrainedModel& model, const Matrix& features) {
    Predictions out;
    out.labels.resize(features.rows());
    out.scores.resize(features.rows());
    const double threshold = decision_threshold(model);
    parallel_for(features.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out.scores[i] = predict_score(model, features.row(i));
            out.labels[i] = out.scores[i] > threshold ? kAttack : kBenign;
        }
    });
    return out;
}

std::string score_definition(const ClassifierConfig& config) {
    switch (config.index()) {
        case 0: return "log p(x, attack) - log p(x, benign); attack when > 0";
        case 1: return "attack fraction among k nearest training rows; attack when > 0.5";
        case 2: return "linear margin w.z + b on standardised inputs; attack when > 0";
        case 3: return "leaf attack probability; attack when > 0.5";
        case 4: return "mean tree attack probability; attack when > 0.5";
        case 5: return "alpha-weighted stump vote sum; attack when > 0";
        default: return "sigmoid of boosted logit; attack when > 0.5";
    }
}

EvalReport evaluate(const TrainedModel& model, const LabeledDataset& test, const SplitDescriptor& split,
                    const PlanDescriptor& plan) {
    if (test.feature_count() != model.feature_count) {
        throw std::invalid_argument("evaluate: test set has " + std::to_string(test.feature_count()) +
                                    " features; model expects " + std::to_string(model.feature_count));
    }
    auto timed = time_fit([&] { return predict_all(model, test.features); });

    EvalReport report;
    report.algorithm = family_display_name(model.config);
    report.tag = family_tag(model.config);
    report.confusion = confusion(test.labels, timed.result.labels);
    report.scores = classification_scores(report.confusion);
    report.roc = roc_curve(test.labels, timed.result.scores);
    report.train_seconds = model.train_seconds;
    report.predict_seconds = timed.seconds;
    report.score_definition = score_definition(model.config);
    report.config = config_to_json(model.config);
    report.split = split;
    report.plan = plan;
    return report;
}

bool is_consistent(const EvalReport& report) {
    if (report.confusion.total() == 0) return false;
    if (!(classification_scores(report.confusion) == report.scores)) return false;
    const auto& pts = report.roc.points;
    if (pts.size() < 2 || !(pts.front() == RocPoint{0.0, 0.0}) || !(pts.back() == RocPoint{1.0, 1.0})) return false;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].fpr < pts[i - 1].fpr) return false;
    }
    return std::abs(trapezoid_area(pts) - report.roc.auc) <= 1e-12;
}

json report_to_json(const EvalReport& r) {
    json points = json::array();
    for (const auto& p : r.roc.points) points.push_back({p.fpr, p.tpr});
    return json{
        {"algorithm", r.algorithm},
        {"tag", r.tag},
        {"confusion", {{"tp", r.confusion.tp}, {"tn", r.confusion.tn}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}}},
        {"accuracy", r.scores.accuracy},
        {"precision", r.scores.precision},
        {"recall", r.scores.recall},
        {"f1", r.scores.f1},
        {"roc", {{"auc", r.roc.auc}, {"points", points}}},
        {"train_seconds", r.train_seconds},
        {"predict_seconds", r.predict_seconds},
        {"score_definition", r.score_definition},
        {"config", r.config},
        {"split",
         {{"train_fraction", r.split.train_fraction},
          {"seed", r.split.seed},
          {"train_rows", r.split.train_rows},
          {"test_rows", r.split.test_rows},
          {"stratified", r.split.stratified}}},
        {"plan",
         {{"correlation_threshold", r.plan.correlation_threshold},
          {"dropped_zero_variance", r.plan.dropped_zero_variance},
          {"dropped_low_correlation", r.plan.dropped_low_correlation},
          {"feature_count", r.plan.feature_count},
          {"fit_on_train_only", r.plan.fit_on_train_only}}},
    };
}

EvalReport report_from_json(const json& doc) {
    try {
        EvalReport r;
        r.algorithm = doc.at("algorithm").get<std::string>();
        r.tag = doc.at("tag").get<std::string>();
        const auto& cm = doc.at("confusion");
        r.confusion = {cm.at("tp").get<std::size_t>(), cm.at("tn").get<std::size_t>(), cm.at("fp").get<std::size_t>(),
                       cm.at("fn").get<std::size_t>()};
        r.scores = {doc.at("accuracy").get<double>(), doc.at("precision").get<double>(), doc.at("recall").get<double>(),
                    doc.at("f1").get<double>()};
        r.roc.auc = doc.at("roc").at("auc").get<double>();
        for (const auto& p : doc.at("roc").at("points")) r.roc.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        r.train_seconds = doc.at("train_seconds").get<double>();
        r.predict_seconds = doc.at("predict_seconds").get<double>();
        r.score_definition = doc.at("score_definition").get<std::string>();
        r.config = doc.at("config");
        const auto& s = doc.at("split");
        r.split = {s.at("train_fraction").get<double>(), s.at("seed").get<std::uint64_t>(),
                   s.at("train_rows").get<std::size_t>(), s.at("test_rows").get<std::size_t>(),
                   s.at("stratified").get<bool>()};
        const auto& p = doc.at("plan");
        r.plan = {p.at("correlation_threshold").get<double>(), p.at("dropped_zero_variance").get<std::size_t>(),
                  p.at("dropped_low_correlation").get<std::size_t>(), p.at("feature_count").get<std::size_t>(),
                  p.at("fit_on_train_only").get<bool>()};
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed evaluation report: ") + e.what());
    }
}

}  // namespace flowgate
