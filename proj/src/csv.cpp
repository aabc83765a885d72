#include "spinet/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spinet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::pair<std::string, std::string> split_meta(const std::string& body) {
  const auto eq = body.find('=');
  if (eq == std::string::npos) return {trim(body), std::string()};
  return {trim(body.substr(0, eq)), trim(body.substr(eq + 1))};
}

void write_comment(std::ostream& out, const std::pair<std::string, std::string>& kv) {
  out << "# " << kv.first;
  if (!kv.second.empty()) out << " = " << kv.second;
  out << '\n';
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("csv: missing column '" + name + "'");
}

const std::string* CsvTable::find_meta(const std::string& key) const {
  for (const auto& kv : meta)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

void CsvTable::add_meta(const std::string& key, double value) { meta.emplace_back(key, format_number(value)); }

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& t) {
  for (const auto& kv : t.meta) write_comment(out, kv);
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw std::invalid_argument("csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  for (const auto& kv : t.footer) write_comment(out, kv);
}

void write_csv_file(const std::string& path, const CsvTable& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, t);
  if (!out) throw std::runtime_error("write failed for " + path);
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      (have_header ? t.footer : t.meta).push_back(split_meta(s.substr(1)));
      continue;
    }
    std::stringstream ss(s);
    std::string cell;
    if (!have_header) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(trim(cell));
      have_header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (!trim(cell.substr(used)).empty()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::invalid_argument("csv line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (row.size() != t.columns.size())
      throw std::invalid_argument("csv line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(t.columns.size()) + " values");
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::invalid_argument("csv: no header row");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_csv(in);
}

}  // namespace spinet
