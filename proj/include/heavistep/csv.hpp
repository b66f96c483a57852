// Plain-text artifacts: number formatting, CSV tables and atomic file writes.
//
// CSV files always carry a header row, use '.' as decimal separator and LF
// line endings. Numbers are printed with 17 significant digits so that they
// read back to the same double.

#ifndef HEAVISTEP_CSV_HPP
#define HEAVISTEP_CSV_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace heavistep {

/// "%.17g", locale independent. Throws std::domain_error on NaN or infinity.
std::string format_number(double x);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text(const std::filesystem::path& path);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  /// Row of numbers; the width must match the header. Non-finite values
  /// are written as nan, inf or -inf.
  void add_row(const std::vector<double>& row);
  std::size_t columns() const { return header_.size(); }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

}  // namespace heavistep

#endif  // HEAVISTEP_CSV_HPP
