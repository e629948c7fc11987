#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flowgate/matrix.hpp"

namespace flowgate {

// Raised for malformed input files (ragged rows, duplicate headers, bad JSON artifacts).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kBenign = 0;
inline constexpr int kAttack = 1;

// A parsed flow-record CSV before any typing. Every row has headers.size() cells.
struct RawTable {
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;

    std::size_t row_count() const noexcept { return rows.size(); }
    std::optional<std::size_t> column_index(std::string_view name) const;

    friend bool operator==(const RawTable&, const RawTable&) = default;
};

struct LabeledDataset {
    Matrix features;
    std::vector<int> labels;  // 0 = benign, 1 = attack
    std::vector<std::string> feature_names;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t feature_count() const noexcept { return feature_names.size(); }

    // Throws std::invalid_argument if shapes disagree, labels leave {0,1},
    // or any cell is NaN/infinite.
    void validate() const;

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

struct SplitPair {
    LabeledDataset train;
    LabeledDataset test;
    std::vector<std::size_t> train_rows;  // indices into the input, ascending
    std::vector<std::size_t> test_rows;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
};

struct LabelBinarization {
    std::vector<int> labels;
    RawTable remaining;                         // input without the label column
    std::map<std::string, std::size_t> tally;  // original label string -> count
};

struct Partition {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

RawTable parse_flow_csv(std::istream& in, std::string_view source = "<stream>");
RawTable load_flow_csv(const std::filesystem::path& path);

void write_flow_csv(const RawTable& table, std::ostream& out);
void save_flow_csv(const RawTable& table, const std::filesystem::path& path);

LabelBinarization binarize_labels(const RawTable& table, std::string_view label_column = "Label");

// Appends `labels` back as a BENIGN/Attack string column.
RawTable attach_labels(const RawTable& table, std::span<const int> labels,
                       std::string_view label_column = "Label");

// Per-class shuffle and cut; each class contributes round(n_c * fraction)
// rows to train, clamped so both sides keep at least one member.
Partition stratified_partition(std::span<const int> labels, double train_fraction, std::uint64_t seed);

SplitPair stratified_split(const LabeledDataset& ds, double train_fraction, std::uint64_t seed);

RawTable select_rows(const RawTable& table, std::span<const std::size_t> rows);
LabeledDataset select_rows(const LabeledDataset& ds, std::span<const std::size_t> rows);
std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> rows);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace flowgate
