#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowgate/dataio.hpp"

namespace flowgate {

inline constexpr int kPlanVersion = 1;
inline constexpr double kDefaultCorrelationThreshold = 0.01;
inline constexpr int kUnseenCategory = -1;

enum class CellKind { null, positive_infinity, negative_infinity, number, text };

struct Cell {
    CellKind kind = CellKind::null;
    double value = 0.0;
};

// Types one raw cell. Empty strings and NaN tokens are null; inf/Infinity
// tokens (any case, optional sign) are infinities.
Cell classify_cell(std::string_view raw);

enum class ColumnKind { numeric, categorical };

// Fitted, replayable cleaning transform. All statistics come from the
// training partition and are frozen.
struct PreprocessPlan {
    std::vector<std::string> input_columns;  // fit-table column order
    std::map<std::string, ColumnKind> column_kinds;
    std::map<std::string, double> column_means;
    std::map<std::string, double> column_finite_max;
    std::map<std::string, double> column_finite_min;
    std::map<std::string, std::map<std::string, int>> encodings;
    std::set<std::string> dropped_zero_variance;
    std::set<std::string> dropped_low_correlation;
    double correlation_threshold = kDefaultCorrelationThreshold;
    std::vector<std::string> fitted_feature_order;
    std::size_t fit_rows = 0;
    std::size_t fit_rows_removed = 0;

    // Columns apply_plan needs: surviving features plus every categorical
    // column (nulls there still remove rows).
    std::vector<std::string> expected_columns() const;

    friend bool operator==(const PreprocessPlan&, const PreprocessPlan&) = default;
};

PreprocessPlan fit_plan(const RawTable& train, std::span<const int> labels, double threshold);

// Row indices of `table` that survive the categorical-null removal step.
std::vector<std::size_t> retained_rows(const PreprocessPlan& plan, const RawTable& table);

LabeledDataset apply_plan(const PreprocessPlan& plan, const RawTable& table, std::span<const int> labels);

// Sample Pearson correlation; 0 when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

nlohmann::json plan_to_json(const PreprocessPlan& plan);
PreprocessPlan plan_from_json(const nlohmann::json& doc);
void save_plan(const PreprocessPlan& plan, const std::filesystem::path& path);
PreprocessPlan load_plan(const std::filesystem::path& path);

}  // namespace flowgate
