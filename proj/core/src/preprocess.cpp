#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "flowgate/parallel.hpp"
#include "flowgate/preprocess.hpp"

namespace flowgate {
namespace {

using json = nlohmann::json;

struct NumericStats {
    double mean = 0.0;
    double finite_max = 0.0;
    double finite_min = 0.0;
    bool any_finite = false;
};

NumericStats numeric_stats(const RawTable& table, std::size_t col) {
    NumericStats s;
    double sum = 0.0;
    std::size_t count = 0;
    s.finite_max = -std::numeric_limits<double>::infinity();
    s.finite_min = std::numeric_limits<double>::infinity();
    for (const auto& row : table.rows) {
        const Cell cell = classify_cell(row[col]);
        if (cell.kind != CellKind::number) continue;
        sum += cell.value;
        ++count;
        s.finite_max = std::max(s.finite_max, cell.value);
        s.finite_min = std::min(s.finite_min, cell.value);
    }
    if (count == 0) return NumericStats{};
    s.mean = sum / static_cast<double>(count);
    s.any_finite = true;
    return s;
}

double repair_numeric(const Cell& cell, double mean, double finite_max, double finite_min) {
    switch (cell.kind) {
        case CellKind::number: return cell.value;
        case CellKind::positive_infinity: return finite_max;
        case CellKind::negative_infinity: return finite_min;
        case CellKind::null:
        case CellKind::text: return mean;
    }
    return mean;
}

bool all_equal(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

const char* kind_name(ColumnKind kind) { return kind == ColumnKind::numeric ? "numeric" : "categorical"; }

}  // namespace

Cell classify_cell(std::string_view raw) {
    const std::string text = trim(raw);
    if (text.empty()) return {CellKind::null, 0.0};
    const std::string lower = to_lower(text);
    if (lower == "nan" || lower == "+nan" || lower == "-nan") return {CellKind::null, 0.0};
    if (lower == "inf" || lower == "+inf" || lower == "infinity" || lower == "+infinity") {
        return {CellKind::positive_infinity, std::numeric_limits<double>::infinity()};
    }
    if (lower == "-inf" || lower == "-infinity") {
        return {CellKind::negative_infinity, -std::numeric_limits<double>::infinity()};
    }
    std::string_view digits = text;
    if (digits.front() == '+') digits.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (end != digits.data() + digits.size()) return {CellKind::text, 0.0};
    if (ec == std::errc::result_out_of_range) {
        // Overflowing literals such as 1e999 behave like infinities; underflow is zero.
        const bool huge = to_lower(digits).find('e') != std::string::npos &&
                          to_lower(digits).find("e-") == std::string::npos;
        if (!huge) return {CellKind::number, 0.0};
        return digits.front() == '-' ? Cell{CellKind::negative_infinity, -std::numeric_limits<double>::infinity()}
                                     : Cell{CellKind::positive_infinity, std::numeric_limits<double>::infinity()};
    }
    if (ec != std::errc{}) return {CellKind::text, 0.0};
    if (std::isnan(value)) return {CellKind::null, 0.0};
    if (std::isinf(value)) {
        return value > 0 ? Cell{CellKind::positive_infinity, value} : Cell{CellKind::negative_infinity, value};
    }
    return {CellKind::number, value};
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()) + ")");
    }
    if (x.size() < 2) throw std::invalid_argument("pearson: need at least 2 observations");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<std::string> PreprocessPlan::expected_columns() const {
    std::vector<std::string> out;
    for (const auto& name : input_columns) {
        const bool feature = std::find(fitted_feature_order.begin(), fitted_feature_order.end(), name) !=
                             fitted_feature_order.end();
        if (feature || column_kinds.at(name) == ColumnKind::categorical) out.push_back(name);
    }
    return out;
}

PreprocessPlan fit_plan(const RawTable& train, std::span<const int> labels, double threshold) {
    if (labels.size() != train.row_count()) {
        throw std::invalid_argument("fit_plan: " + std::to_string(labels.size()) + " labels for " +
                                    std::to_string(train.row_count()) + " rows");
    }
    if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
        throw std::invalid_argument("fit_plan: correlation threshold must be finite and >= 0");
    }

    PreprocessPlan plan;
    plan.input_columns = train.headers;
    plan.correlation_threshold = threshold;
    plan.fit_rows = train.row_count();

    const std::size_t ncols = train.headers.size();
    std::vector<bool> usable(ncols, true);

    // Column typing and step 1 statistics (means and finite extremes).
    for (std::size_t c = 0; c < ncols; ++c) {
        const auto& name = train.headers[c];
        const bool has_text = std::any_of(train.rows.begin(), train.rows.end(), [&](const auto& row) {
            return classify_cell(row[c]).kind == CellKind::text;
        });
        if (has_text) {
            plan.column_kinds[name] = ColumnKind::categorical;
            continue;
        }
        plan.column_kinds[name] = ColumnKind::numeric;
        const NumericStats s = numeric_stats(train, c);
        plan.column_means[name] = s.mean;
        plan.column_finite_max[name] = s.finite_max;
        plan.column_finite_min[name] = s.finite_min;
        usable[c] = s.any_finite;
    }

    // Step 2: rows with a null categorical cell cannot be repaired.
    const std::vector<std::size_t> kept = retained_rows(plan, train);
    plan.fit_rows_removed = train.row_count() - kept.size();

    // Step 3: ordinal codes in first-appearance order over the kept rows.
    for (std::size_t c = 0; c < ncols; ++c) {
        const auto& name = train.headers[c];
        if (plan.column_kinds[name] != ColumnKind::categorical) continue;
        auto& codes = plan.encodings[name];
        for (std::size_t r : kept) {
            const std::string key = trim(train.rows[r][c]);
            codes.try_emplace(key, static_cast<int>(codes.size()));
        }
    }

    // Steps 4 and 5 on the repaired kept rows.
    std::vector<double> label_column;
    label_column.reserve(kept.size());
    for (std::size_t r : kept) label_column.push_back(static_cast<double>(labels[r]));

    std::vector<double> column(kept.size());
    for (std::size_t c = 0; c < ncols; ++c) {
        const auto& name = train.headers[c];
        if (!usable[c] || kept.empty()) {
            plan.dropped_zero_variance.insert(name);
            continue;
        }
        if (plan.column_kinds[name] == ColumnKind::numeric) {
            const double mean = plan.column_means[name];
            const double hi = plan.column_finite_max[name];
            const double lo = plan.column_finite_min[name];
            for (std::size_t i = 0; i < kept.size(); ++i) {
                column[i] = repair_numeric(classify_cell(train.rows[kept[i]][c]), mean, hi, lo);
            }
        } else {
            const auto& codes = plan.encodings[name];
            for (std::size_t i = 0; i < kept.size(); ++i) {
                column[i] = codes.at(trim(train.rows[kept[i]][c]));
            }
        }
        if (all_equal(column)) {
            plan.dropped_zero_variance.insert(name);
            continue;
        }
        const double r = kept.size() >= 2 ? pearson(column, label_column) : 0.0;
        if (std::abs(r) < threshold) {
            plan.dropped_low_correlation.insert(name);
            continue;
        }
        plan.fitted_feature_order.push_back(name);
    }

    if (plan.fitted_feature_order.empty()) {
        throw std::invalid_argument("fit_plan: no feature columns survive preprocessing");
    }
    return plan;
}

std::vector<std::size_t> retained_rows(const PreprocessPlan& plan, const RawTable& table) {
    std::vector<std::size_t> categorical;
    for (const auto& [name, kind] : plan.column_kinds) {
        if (kind != ColumnKind::categorical) continue;
        if (const auto idx = table.column_index(name)) categorical.push_back(*idx);
    }
    std::vector<std::size_t> kept;
    kept.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        const bool has_null = std::any_of(categorical.begin(), categorical.end(), [&](std::size_t c) {
            return classify_cell(table.rows[r][c]).kind == CellKind::null;
        });
        if (!has_null) kept.push_back(r);
    }
    return kept;
}

LabeledDataset apply_plan(const PreprocessPlan& plan, const RawTable& table, std::span<const int> labels) {
    if (labels.size() != table.row_count()) {
        throw std::invalid_argument("apply_plan: " + std::to_string(labels.size()) + " labels for " +
                                    std::to_string(table.row_count()) + " rows");
    }
    for (const auto& name : plan.expected_columns()) {
        if (!table.column_index(name)) throw std::invalid_argument("apply_plan: missing column '" + name + "'");
    }

    const std::vector<std::size_t> kept = retained_rows(plan, table);
    const std::size_t nfeat = plan.fitted_feature_order.size();

    struct ColumnRecipe {
        std::size_t source = 0;
        bool numeric = true;
        double mean = 0.0;
        double hi = 0.0;
        double lo = 0.0;
        const std::map<std::string, int>* codes = nullptr;
    };
    std::vector<ColumnRecipe> recipes;
    recipes.reserve(nfeat);
    for (const auto& name : plan.fitted_feature_order) {
        ColumnRecipe recipe;
        recipe.source = *table.column_index(name);
        recipe.numeric = plan.column_kinds.at(name) == ColumnKind::numeric;
        if (recipe.numeric) {
            recipe.mean = plan.column_means.at(name);
            recipe.hi = plan.column_finite_max.at(name);
            recipe.lo = plan.column_finite_min.at(name);
        } else {
            recipe.codes = &plan.encodings.at(name);
        }
        recipes.push_back(recipe);
    }

    Matrix features(kept.size(), nfeat);
    parallel_for(kept.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& row = table.rows[kept[i]];
            for (std::size_t f = 0; f < nfeat; ++f) {
                const auto& recipe = recipes[f];
                const std::string& raw = row[recipe.source];
                if (recipe.numeric) {
                    features(i, f) = repair_numeric(classify_cell(raw), recipe.mean, recipe.hi, recipe.lo);
                } else {
                    const auto it = recipe.codes->find(trim(raw));
                    features(i, f) = it == recipe.codes->end() ? kUnseenCategory : it->second;
                }
            }
        }
    });

    LabeledDataset out;
    out.features = std::move(features);
    out.labels = select_labels(labels, kept);
    out.feature_names = plan.fitted_feature_order;
    return out;
}

json plan_to_json(const PreprocessPlan& plan) {
    json kinds = json::object();
    for (const auto& [name, kind] : plan.column_kinds) kinds[name] = kind_name(kind);
    return json{
        {"plan_version", kPlanVersion},
        {"input_columns", plan.input_columns},
        {"column_kinds", kinds},
        {"column_means", plan.column_means},
        {"column_finite_max", plan.column_finite_max},
        {"column_finite_min", plan.column_finite_min},
        {"encodings", plan.encodings},
        {"dropped_zero_variance", plan.dropped_zero_variance},
        {"dropped_low_correlation", plan.dropped_low_correlation},
        {"correlation_threshold", plan.correlation_threshold},
        {"fitted_feature_order", plan.fitted_feature_order},
        {"fit_rows", plan.fit_rows},
        {"fit_rows_removed", plan.fit_rows_removed},
    };
}

PreprocessPlan plan_from_json(const json& doc) {
    try {
        const int version = doc.at("plan_version").get<int>();
        if (version != kPlanVersion) {
            throw FormatError("unsupported plan_version " + std::to_string(version));
        }
        PreprocessPlan plan;
        plan.input_columns = doc.at("input_columns").get<std::vector<std::string>>();
        for (const auto& [name, kind] : doc.at("column_kinds").items()) {
            const auto text = kind.get<std::string>();
            if (text != "numeric" && text != "categorical") throw FormatError("bad column kind '" + text + "'");
            plan.column_kinds[name] = text == "numeric" ? ColumnKind::numeric : ColumnKind::categorical;
        }
        plan.column_means = doc.at("column_means").get<std::map<std::string, double>>();
        plan.column_finite_max = doc.at("column_finite_max").get<std::map<std::string, double>>();
        plan.column_finite_min = doc.at("column_finite_min").get<std::map<std::string, double>>();
        plan.encodings = doc.at("encodings").get<std::map<std::string, std::map<std::string, int>>>();
        plan.dropped_zero_variance = doc.at("dropped_zero_variance").get<std::set<std::string>>();
        plan.dropped_low_correlation = doc.at("dropped_low_correlation").get<std::set<std::string>>();
        plan.correlation_threshold = doc.at("correlation_threshold").get<double>();
        plan.fitted_feature_order = doc.at("fitted_feature_order").get<std::vector<std::string>>();
        plan.fit_rows = doc.at("fit_rows").get<std::size_t>();
        plan.fit_rows_removed = doc.at("fit_rows_removed").get<std::size_t>();
        for (const auto& name : plan.input_columns) {
            if (!plan.column_kinds.count(name)) throw FormatError("column '" + name + "' has no kind");
        }
        return plan;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed plan document: ") + e.what());
    }
}

void save_plan(const PreprocessPlan& plan, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << plan_to_json(plan).dump(2) << '\n';
}

PreprocessPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return plan_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace flowgate
