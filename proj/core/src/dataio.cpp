#include <array>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "flowgate/dataio.hpp"

namespace flowgate {

std::string trim(std::string_view s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && is_space(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && is_space(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::optional<std::size_t> RawTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < headers.size(); ++i) {
        if (headers[i] == name) return i;
    }
    return std::nullopt;
}

void LabeledDataset::validate() const {
    if (features.rows() != labels.size()) {
        throw std::invalid_argument("feature rows (" + std::to_string(features.rows()) +
                                    ") != label count (" + std::to_string(labels.size()) + ")");
    }
    if (features.cols() != feature_names.size()) {
        throw std::invalid_argument("feature columns (" + std::to_string(features.cols()) +
                                    ") != feature name count (" + std::to_string(feature_names.size()) + ")");
    }
    for (int y : labels) {
        if (y != kBenign && y != kAttack) throw std::invalid_argument("label outside {0,1}");
    }
    for (double v : features.data()) {
        if (!std::isfinite(v)) throw std::invalid_argument("dataset contains NaN or infinite values");
    }
}

LabelBinarization binarize_labels(const RawTable& table, std::string_view label_column) {
    const auto label_idx = table.column_index(label_column);
    if (!label_idx) {
        throw std::invalid_argument("label column '" + std::string(label_column) + "' not found");
    }
    LabelBinarization out;
    out.labels.reserve(table.row_count());
    for (std::size_t c = 0; c < table.headers.size(); ++c) {
        if (c != *label_idx) out.remaining.headers.push_back(table.headers[c]);
    }
    out.remaining.rows.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        const auto& row = table.rows[r];
        const std::string value = trim(row[*label_idx]);
        if (value.empty()) {
            throw std::invalid_argument("row " + std::to_string(r + 1) + ": empty label");
        }
        out.labels.push_back(to_lower(value) == "benign" ? kBenign : kAttack);
        ++out.tally[row[*label_idx]];

        std::vector<std::string> rest;
        rest.reserve(row.size() - 1);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c != *label_idx) rest.push_back(row[c]);
        }
        out.remaining.rows.push_back(std::move(rest));
    }
    return out;
}

RawTable attach_labels(const RawTable& table, std::span<const int> labels, std::string_view label_column) {
    if (labels.size() != table.row_count()) throw std::invalid_argument("label count != row count");
    if (table.column_index(label_column)) {
        throw std::invalid_argument("table already has a '" + std::string(label_column) + "' column");
    }
    RawTable out = table;
    out.headers.emplace_back(label_column);
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
        out.rows[r].emplace_back(labels[r] == kAttack ? "Attack" : "BENIGN");
    }
    return out;
}

Partition stratified_partition(std::span<const int> labels, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    }
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != kBenign && labels[i] != kAttack) throw std::invalid_argument("label outside {0,1}");
        by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    for (int c : {kBenign, kAttack}) {
        if (by_class[c].size() < 2) {
            throw std::invalid_argument(std::string(c == kBenign ? "benign" : "attack") + " class has " +
                                        std::to_string(by_class[c].size()) +
                                        " member(s); stratification needs at least 2");
        }
    }

    std::mt19937_64 rng(seed);
    Partition out;
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        const auto n = static_cast<double>(members.size());
        auto take = static_cast<std::size_t>(std::llround(n * train_fraction));
        take = std::clamp<std::size_t>(take, 1, members.size() - 1);
        out.train.insert(out.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
        out.test.insert(out.test.end(), members.begin() + static_cast<std::ptrdiff_t>(take), members.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

SplitPair stratified_split(const LabeledDataset& ds, double train_fraction, std::uint64_t seed) {
    Partition part = stratified_partition(ds.labels, train_fraction, seed);
    SplitPair out;
    out.train = select_rows(ds, part.train);
    out.test = select_rows(ds, part.test);
    out.train_rows = std::move(part.train);
    out.test_rows = std::move(part.test);
    out.seed = seed;
    out.train_fraction = train_fraction;
    return out;
}

RawTable select_rows(const RawTable& table, std::span<const std::size_t> rows) {
    RawTable out;
    out.headers = table.headers;
    out.rows.reserve(rows.size());
    for (std::size_t r : rows) out.rows.push_back(table.rows.at(r));
    return out;
}

LabeledDataset select_rows(const LabeledDataset& ds, std::span<const std::size_t> rows) {
    LabeledDataset out;
    out.feature_names = ds.feature_names;
    std::vector<double> data;
    data.reserve(rows.size() * ds.features.cols());
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        auto src = ds.features.row(r);
        data.insert(data.end(), src.begin(), src.end());
        out.labels.push_back(ds.labels.at(r));
    }
    out.features = Matrix(rows.size(), ds.features.cols(), std::move(data));
    return out;
}

std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(labels[r]);
    return out;
}

}  // namespace flowgate
