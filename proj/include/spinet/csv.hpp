#ifndef SPINET_CSV_HPP
#define SPINET_CSV_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace spinet {

/// '#'-prefixed "key = value" metadata lines, a header row, numeric rows and
/// optional '#' footer lines after the data.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> footer;

  /// Index of a named column; throws std::invalid_argument if absent.
  int column(const std::string& name) const;
  /// Metadata value or nullptr.
  const std::string* find_meta(const std::string& key) const;
  void add_meta(const std::string& key, const std::string& value) { meta.emplace_back(key, value); }
  void add_meta(const std::string& key, double value);
};

/// %.16e, the shortest fixed format that round-trips a double.
std::string format_number(double v);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);
/// Throws std::invalid_argument with the line number on malformed input.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace spinet

#endif
