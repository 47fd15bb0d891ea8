#ifndef MODESHIFT_CSV_HPP
#define MODESHIFT_CSV_HPP

#include <string>
#include <unordered_map>
#include <vector>

namespace modeshift {

/// Comma-separated table with a required header row. Cells are kept as
/// trimmed strings; typed access is column-name keyed and reports
/// row/column coordinates on parse failures.
class CsvTable {
  public:
    static CsvTable read_file(const std::string& path);
    static CsvTable parse(const std::string& text, const std::string& origin = "<string>");

    std::size_t n_rows() const { return cells_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    bool has_column(const std::string& name) const;

    /// Index of a required column; throws DataError naming the column.
    std::size_t column(const std::string& name) const;

    const std::string& cell(std::size_t row, std::size_t col) const { return cells_[row][col]; }
    double number(std::size_t row, std::size_t col) const;
    long integer(std::size_t row, std::size_t col) const;
    /// 0/1 flag; anything else is a data error.
    bool flag(std::size_t row, std::size_t col) const;

  private:
    std::string describe(std::size_t row, std::size_t col) const;

    std::string origin_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> cells_;
};

/// Shortest round-trip decimal rendering; used for all numeric output so
/// reruns are byte-identical.
std::string format_number(double v);

/// Minimal CSV writer; callers assemble rows of already-formatted fields.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(std::vector<std::string> fields);
    void write_file(const std::string& path) const;
    std::string to_string() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace modeshift

#endif
