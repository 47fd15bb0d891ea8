#include "modeshift/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "modeshift/types.hpp"

namespace modeshift {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

CsvTable CsvTable::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

CsvTable CsvTable::parse(const std::string& text, const std::string& origin) {
    CsvTable t;
    t.origin_ = origin;
    std::stringstream ss(text);
    std::string line;
    bool have_header = false;
    while (std::getline(ss, line)) {
        if (trim(line).empty()) continue;
        auto fields = split_line(line);
        if (!have_header) {
            t.header_ = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != t.header_.size()) {
            throw DataError(origin + ": row " + std::to_string(t.cells_.size() + 1) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(t.header_.size()));
        }
        t.cells_.push_back(std::move(fields));
    }
    if (!have_header) throw DataError(origin + ": missing header row");
    return t;
}

bool CsvTable::has_column(const std::string& name) const {
    for (const auto& h : header_)
        if (h == name) return true;
    return false;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    throw DataError(origin_ + ": missing required column: " + name);
}

std::string CsvTable::describe(std::size_t row, std::size_t col) const {
    return origin_ + ": row " + std::to_string(row + 1) + ", column " + header_[col];
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    const std::string& s = cells_[row][col];
    if (s.empty()) throw DataError(describe(row, col) + ": empty numeric field");
    const char* begin = s.data();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end != begin + s.size() || errno == ERANGE) {
        throw DataError(describe(row, col) + ": not a number: '" + s + "'");
    }
    return v;
}

long CsvTable::integer(std::size_t row, std::size_t col) const {
    double v = number(row, col);
    long r = static_cast<long>(v);
    if (static_cast<double>(r) != v) {
        throw DataError(describe(row, col) + ": not an integer: '" + cells_[row][col] + "'");
    }
    return r;
}

bool CsvTable::flag(std::size_t row, std::size_t col) const {
    long v = integer(row, col);
    if (v != 0 && v != 1) throw DataError(describe(row, col) + ": flag must be 0 or 1");
    return v == 1;
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> fields) {
    if (fields.size() != header_.size()) {
        throw std::logic_error("csv row width does not match header");
    }
    rows_.push_back(std::move(fields));
}

std::string CsvWriter::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << to_string();
}

}  // namespace modeshift
