#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowgate/dataio.hpp"
#include "flowgate/learners.hpp"

namespace flowgate {

// Attack (1) is the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ClassificationScores {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    friend bool operator==(const ClassificationScores&, const ClassificationScores&) = default;
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
    std::vector<RocPoint> points;  // (0,0) first, (1,1) last, fpr non-decreasing
    double auc = 0.0;
    friend bool operator==(const RocCurve&, const RocCurve&) = default;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

// Zero denominators yield 0 for precision, recall and f1.
ClassificationScores classification_scores(const ConfusionMatrix& cm);

// Sweeps the distinct score values in descending order; tied scores form one step.
RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores);

double trapezoid_area(std::span<const RocPoint> points);

void write_roc_csv(const RocCurve& roc, std::ostream& out);

template <typename T>
struct Timed {
    T result;
    double seconds = 0.0;
};

template <>
struct Timed<void> {
    double seconds = 0.0;
};

// Wall time of `action` on the steady clock.
template <typename Action>
auto time_fit(Action&& action) -> Timed<std::invoke_result_t<Action>> {
    using Result = std::invoke_result_t<Action>;
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<Result>) {
        std::forward<Action>(action)();
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return Timed<void>{elapsed.count()};
    } else {
        Result result = std::forward<Action>(action)();
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return Timed<Result>{std::move(result), elapsed.count()};
    }
}

struct SplitDescriptor {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    bool stratified = true;
    friend bool operator==(const SplitDescriptor&, const SplitDescriptor&) = default;
};

struct PlanDescriptor {
    double correlation_threshold = 0.0;
    std::size_t dropped_zero_variance = 0;
    std::size_t dropped_low_correlation = 0;
    std::size_t feature_count = 0;
    bool fit_on_train_only = true;
    friend bool operator==(const PlanDescriptor&, const PlanDescriptor&) = default;
};

struct EvalReport {
    std::string algorithm;  // display name
    std::string tag;        // CLI name
    ConfusionMatrix confusion;
    ClassificationScores scores;
    RocCurve roc;
    double train_seconds = 0.0;
    double predict_seconds = 0.0;
    std::string score_definition;
    nlohmann::json config;
    SplitDescriptor split;
    PlanDescriptor plan;
};

struct Predictions {
    std::vector<int> labels;
    std::vector<double> scores;
};

// Scores every row (in parallel blocks; output order matches input order).
Predictions predict_all(const TrainedModel& model, const Matrix& features);

EvalReport evaluate(const TrainedModel& model, const LabeledDataset& test, const SplitDescriptor& split,
                    const PlanDescriptor& plan);

// True when scores and auc re-derive exactly from the stored confusion matrix and ROC points.
bool is_consistent(const EvalReport& report);

std::string score_definition(const ClassifierConfig& config);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& doc);

}  // namespace flowgate
