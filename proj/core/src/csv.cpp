#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>

#include "flowgate/dataio.hpp"

namespace flowgate {
namespace {

struct Record {
    std::vector<std::string> cells;
    std::size_t line = 0;
    bool blank = false;  // a physical line with nothing on it
};

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
// line breaks. Both LF and CRLF terminate records.
class CsvReader {
public:
    explicit CsvReader(std::string text) : text_(std::move(text)) {
        if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
    }

    bool next(Record& record, std::string_view source) {
        if (pos_ >= text_.size()) return false;
        record.cells.clear();
        record.line = line_;
        std::string field;
        bool quoted_any = false;
        bool in_quotes = false;
        bool field_was_quoted = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (in_quotes) {
                if (c == '"') {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                        field.push_back('"');
                        pos_ += 2;
                        continue;
                    }
                    in_quotes = false;
                    ++pos_;
                    continue;
                }
                if (c == '\n') ++line_;
                field.push_back(c);
                ++pos_;
                continue;
            }
            if (c == '"' && field.empty() && !field_was_quoted) {
                in_quotes = true;
                field_was_quoted = true;
                quoted_any = true;
                ++pos_;
                continue;
            }
            if (c == ',') {
                record.cells.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
                ++pos_;
                continue;
            }
            if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
                ++pos_;
                continue;
            }
            if (c == '\n') {
                ++pos_;
                ++line_;
                break;
            }
            field.push_back(c);
            ++pos_;
        }
        if (in_quotes) {
            throw FormatError(std::string(source) + ":" + std::to_string(record.line) +
                              ": unterminated quoted field");
        }
        record.cells.push_back(std::move(field));
        record.blank = !quoted_any && record.cells.size() == 1 && record.cells[0].empty();
        return true;
    }

private:
    std::string text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

bool needs_quotes(std::string_view cell) {
    return cell.find_first_of(",\"\r\n") != std::string_view::npos;
}

void write_cell(std::ostream& out, std::string_view cell, bool force_quotes) {
    if (!force_quotes && !needs_quotes(cell)) {
        out << cell;
        return;
    }
    out << '"';
    for (char c : cell) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

void write_record(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        // A lone empty cell would otherwise read back as a blank line.
        write_cell(out, cells[i], cells.size() == 1 && cells[i].empty());
    }
    out << '\n';
}

}  // namespace

RawTable parse_flow_csv(std::istream& in, std::string_view source) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw std::runtime_error(std::string(source) + ": read failure");
    CsvReader reader(std::move(text));

    RawTable table;
    Record record;
    bool have_header = false;
    while (reader.next(record, source)) {
        if (record.blank) continue;
        if (!have_header) {
            std::set<std::string> seen;
            for (auto& cell : record.cells) {
                std::string name = trim(cell);
                if (!seen.insert(name).second) {
                    throw FormatError(std::string(source) + ":" + std::to_string(record.line) +
                                      ": duplicate column name '" + name + "'");
                }
                table.headers.push_back(std::move(name));
            }
            have_header = true;
            continue;
        }
        if (record.cells.size() != table.headers.size()) {
            throw FormatError(std::string(source) + ":" + std::to_string(record.line) + ": expected " +
                              std::to_string(table.headers.size()) + " cells, found " +
                              std::to_string(record.cells.size()));
        }
        table.rows.push_back(std::move(record.cells));
        record.cells = {};
    }
    if (!have_header) throw FormatError(std::string(source) + ": missing header line");
    return table;
}

RawTable load_flow_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse_flow_csv(in, path.string());
}

void write_flow_csv(const RawTable& table, std::ostream& out) {
    write_record(out, table.headers);
    for (const auto& row : table.rows) write_record(out, row);
}

void save_flow_csv(const RawTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_flow_csv(table, out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace flowgate
