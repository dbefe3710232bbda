#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace abwave::tools {

/// Column-oriented table written as CSV. Header cells carry the unit in
/// parentheses, e.g. "theta(mrad)". Numbers are printed with 17 significant
/// digits so they read back bit for bit.
class Table {
 public:
  struct Column {
    std::string header;
    bool is_text = false;
    std::vector<double> numbers;
    std::vector<std::string> text;
  };

  void add_numeric(std::string header, std::vector<double> values);
  void add_text(std::string header, std::vector<std::string> values);

  std::size_t rows() const;
  const std::vector<Column>& columns() const { return columns_; }
  /// Index of the column whose header is `header` or starts with
  /// `header` followed by '('. Throws std::out_of_range if absent.
  std::size_t index_of(const std::string& header) const;
  const Column& column(const std::string& header) const;

  std::string to_csv() const;
  /// Numeric detection is per column: a column is numeric when every cell
  /// parses as a number (including nan and inf).
  static Table from_csv(const std::string& text);

 private:
  std::vector<Column> columns_;
};

std::string format_csv_number(double v);

/// What to draw from a table: x column, one polyline per y column. Rows
/// whose mask column is non-zero, or with non-finite values, are skipped.
struct PlotSpec {
  std::string title;
  std::string x_column;
  std::vector<std::string> y_columns;
  std::string mask_column;  ///< empty: no mask
  std::string source_csv;   ///< file name noted in the SVG
};

/// Deterministic SVG line plot built only from the table contents.
std::string render_svg(const Table& table, const PlotSpec& spec);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace abwave::tools
