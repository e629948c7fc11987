#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "flowgate/dataio.hpp"

namespace fg = flowgate;

namespace {

fg::RawTable parse(const std::string& text) {
    std::istringstream in(text);
    return fg::parse_flow_csv(in, "test.csv");
}

std::string render(const fg::RawTable& table) {
    std::ostringstream out;
    fg::write_flow_csv(table, out);
    return out.str();
}

fg::RawTable labelled(const std::vector<std::string>& labels) {
    fg::RawTable t;
    t.headers = {"x", "Label"};
    for (std::size_t i = 0; i < labels.size(); ++i) t.rows.push_back({std::to_string(i), labels[i]});
    return t;
}

fg::LabeledDataset counted_dataset(std::size_t attacks, std::size_t benign) {
    fg::LabeledDataset ds;
    const std::size_t n = attacks + benign;
    ds.features = fg::Matrix(n, 1);
    ds.feature_names = {"x"};
    for (std::size_t i = 0; i < n; ++i) {
        ds.features(i, 0) = static_cast<double>(i);
        ds.labels.push_back(i < attacks ? fg::kAttack : fg::kBenign);
    }
    return ds;
}

}  // namespace

TEST(CsvLoad, TrimsHeaderWhitespace) {
    const auto t = parse(" Label,Flow Duration\nBENIGN,3\n");
    EXPECT_EQ(t.headers, (std::vector<std::string>{"Label", "Flow Duration"}));
}

TEST(CsvLoad, CountsDataRows) {
    const auto t = parse("a,b\n1,2\n3,4\n");
    EXPECT_EQ(t.row_count(), 2u);
    EXPECT_EQ(t.rows[1], (std::vector<std::string>{"3", "4"}));
}

TEST(CsvLoad, RaggedRowNamesItsLine) {
    try {
        parse("a,b,c,d,e,f\n1,2,3,4,5,6\n1,2,3,4,5\n");
        FAIL() << "expected a ragged-row error";
    } catch (const fg::FormatError& e) {
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
    }
}

TEST(CsvLoad, DuplicateHeaderAfterTrimIsRejected) {
    EXPECT_THROW(parse("Label, Label\n1,2\n"), fg::FormatError);
}

TEST(CsvLoad, PreservesEmptyCells) {
    const auto t = parse("a,b,c\n,2,\n");
    EXPECT_EQ(t.rows[0], (std::vector<std::string>{"", "2", ""}));
}

TEST(CsvLoad, HandlesQuotesCrlfAndBom) {
    const auto t = parse("\xEF\xBB\xBF" "a,b\r\n\"x, \"\"y\"\"\",\"multi\nline\"\r\n");
    ASSERT_EQ(t.headers, (std::vector<std::string>{"a", "b"}));
    ASSERT_EQ(t.row_count(), 1u);
    EXPECT_EQ(t.rows[0][0], "x, \"y\"");
    EXPECT_EQ(t.rows[0][1], "multi\nline");
}

TEST(CsvLoad, SkipsBlankLines) {
    const auto t = parse("a\n1\n\n2\n");
    EXPECT_EQ(t.row_count(), 2u);
}

TEST(CsvLoad, MissingHeaderIsAnError) { EXPECT_THROW(parse(""), fg::FormatError); }

TEST(CsvLoad, UnterminatedQuoteIsAnError) { EXPECT_THROW(parse("a\n\"oops\n"), fg::FormatError); }

TEST(CsvLoad, MissingFileIsAnError) {
    EXPECT_THROW(fg::load_flow_csv("/nonexistent/flowgate.csv"), std::runtime_error);
}

TEST(CsvRoundTrip, HandwrittenTable) {
    fg::RawTable t;
    t.headers = {"a", "b b", "c"};
    t.rows = {{"1", "", "inf"}, {"x,y", "say \"hi\"", " padded "}, {"line\nbreak", "NaN", "-3e5"}};
    EXPECT_EQ(parse(render(t)), t);
}

TEST(CsvRoundTrip, SingleEmptyColumn) {
    fg::RawTable t;
    t.headers = {"only"};
    t.rows = {{""}, {"1"}, {""}};
    EXPECT_EQ(parse(render(t)), t);
}

TEST(CsvRoundTrip, RandomTablesThroughFiles) {
    std::mt19937_64 rng(11);
    const std::string alphabet = "ab ,\"\n\r9.-";
    const auto dir = std::filesystem::temp_directory_path() / "flowgate_dataio_roundtrip";
    std::filesystem::create_directories(dir);
    for (int trial = 0; trial < 50; ++trial) {
        fg::RawTable t;
        const std::size_t cols = 1 + rng() % 5;
        for (std::size_t c = 0; c < cols; ++c) t.headers.push_back("h" + std::to_string(c));
        const std::size_t rows = rng() % 8;
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<std::string> row;
            for (std::size_t c = 0; c < cols; ++c) {
                std::string cell;
                const std::size_t len = rng() % 6;
                for (std::size_t i = 0; i < len; ++i) cell.push_back(alphabet[rng() % alphabet.size()]);
                row.push_back(cell);
            }
            t.rows.push_back(row);
        }
        const auto path = dir / "t.csv";
        fg::save_flow_csv(t, path);
        EXPECT_EQ(fg::load_flow_csv(path), t) << "trial " << trial;
    }
    std::filesystem::remove_all(dir);
}

TEST(BinarizeLabels, PaperTaxonomy) {
    const auto b = fg::binarize_labels(labelled({"BENIGN", "Syn", "UDP", "MSSQL"}));
    EXPECT_EQ(b.labels, (std::vector<int>{0, 1, 1, 1}));
    EXPECT_EQ(b.remaining.headers, (std::vector<std::string>{"x"}));
    EXPECT_EQ(b.tally.at("Syn"), 1u);
    EXPECT_EQ(b.tally.at("BENIGN"), 1u);
}

TEST(BinarizeLabels, AllBenign) {
    const auto b = fg::binarize_labels(labelled({"BENIGN", "BENIGN", "BENIGN"}));
    EXPECT_EQ(b.labels, (std::vector<int>{0, 0, 0}));
}

TEST(BinarizeLabels, CaseAndWhitespaceInsensitive) {
    EXPECT_EQ(fg::binarize_labels(labelled({"benign "})).labels, (std::vector<int>{0}));
    EXPECT_EQ(fg::binarize_labels(labelled({" Benign"})).labels, (std::vector<int>{0}));
}

TEST(BinarizeLabels, EmptyLabelIsAnError) {
    EXPECT_THROW(fg::binarize_labels(labelled({"BENIGN", "  "})), std::invalid_argument);
}

TEST(BinarizeLabels, MissingColumnIsAnError) {
    EXPECT_THROW(fg::binarize_labels(labelled({"BENIGN"}), "Class"), std::invalid_argument);
}

TEST(BinarizeLabels, OutputIsBinaryAndSized) {
    std::mt19937_64 rng(5);
    const std::vector<std::string> pool = {"BENIGN", "benign", "DrDoS_DNS", "Syn", "LDAP", "UDP-lag"};
    std::vector<std::string> labels;
    for (int i = 0; i < 500; ++i) labels.push_back(pool[rng() % pool.size()]);
    const auto b = fg::binarize_labels(labelled(labels));
    ASSERT_EQ(b.labels.size(), labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        EXPECT_EQ(b.labels[i], fg::to_lower(labels[i]) == "benign" ? 0 : 1);
    }
    std::size_t tallied = 0;
    for (const auto& [_, count] : b.tally) tallied += count;
    EXPECT_EQ(tallied, labels.size());
}

TEST(AttachLabels, InvertsBinarization) {
    const auto b = fg::binarize_labels(labelled({"BENIGN", "Syn"}));
    const auto t = fg::attach_labels(b.remaining, b.labels);
    EXPECT_EQ(fg::binarize_labels(t).labels, b.labels);
}

TEST(StratifiedSplit, ExactProportions) {
    const auto split = fg::stratified_split(counted_dataset(90, 10), 0.8, 7);
    const auto train_attacks = std::count(split.train.labels.begin(), split.train.labels.end(), fg::kAttack);
    EXPECT_EQ(train_attacks, 72);
    EXPECT_EQ(split.train.size() - static_cast<std::size_t>(train_attacks), 8u);
    EXPECT_EQ(split.test.size(), 20u);
}

TEST(StratifiedSplit, DeterministicForSeed) {
    const auto ds = counted_dataset(90, 10);
    const auto a = fg::stratified_split(ds, 0.8, 7);
    const auto b = fg::stratified_split(ds, 0.8, 7);
    EXPECT_EQ(a.train_rows, b.train_rows);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    const auto c = fg::stratified_split(ds, 0.8, 8);
    EXPECT_NE(a.train_rows, c.train_rows);
}

TEST(StratifiedSplit, SingletonClassIsAnError) {
    EXPECT_THROW(fg::stratified_split(counted_dataset(9, 1), 0.5, 1), std::invalid_argument);
}

TEST(StratifiedSplit, FractionOutsideOpenIntervalIsAnError) {
    EXPECT_THROW(fg::stratified_split(counted_dataset(9, 9), 0.0, 1), std::invalid_argument);
    EXPECT_THROW(fg::stratified_split(counted_dataset(9, 9), 1.0, 1), std::invalid_argument);
}

TEST(StratifiedSplit, PartitionAndStratificationProperties) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t attacks = 2 + rng() % 200;
        const std::size_t benign = 2 + rng() % 200;
        const double fraction = 0.05 + 0.9 * std::uniform_real_distribution<double>(0, 1)(rng);
        const auto ds = counted_dataset(attacks, benign);
        const auto split = fg::stratified_split(ds, fraction, rng());

        std::set<std::size_t> all(split.train_rows.begin(), split.train_rows.end());
        for (auto r : split.test_rows) EXPECT_TRUE(all.insert(r).second) << "row in both partitions";
        EXPECT_EQ(all.size(), ds.size());
        EXPECT_TRUE(std::is_sorted(split.train_rows.begin(), split.train_rows.end()));

        const double n = static_cast<double>(ds.size());
        const double input_share = static_cast<double>(attacks) / n;
        for (const auto* part : {&split.train, &split.test}) {
            const double size = static_cast<double>(part->size());
            const double share =
                static_cast<double>(std::count(part->labels.begin(), part->labels.end(), fg::kAttack)) / size;
            EXPECT_LE(std::abs(share - input_share), 1.0 / size + 1e-12);
            EXPECT_GT(std::count(part->labels.begin(), part->labels.end(), fg::kBenign), 0);
        }
    }
}

TEST(LabeledDataset, ValidateRejectsNonFinite) {
    auto ds = counted_dataset(2, 2);
    EXPECT_NO_THROW(ds.validate());
    ds.features(1, 0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(ds.validate(), std::invalid_argument);
}

TEST(SelectRows, PicksRequestedRowsInOrder) {
    const auto t = labelled({"a", "b", "c", "d"});
    const std::vector<std::size_t> rows = {3, 1};
    const auto s = fg::select_rows(t, rows);
    ASSERT_EQ(s.row_count(), 2u);
    EXPECT_EQ(s.rows[0][1], "d");
    EXPECT_EQ(s.rows[1][1], "b");
}
