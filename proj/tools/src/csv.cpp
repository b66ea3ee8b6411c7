#include "fracdu_cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracdu/error.hpp"

namespace fracdu::cli {

namespace {

const char* const kModule = "cli_harness";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, kModule, "cannot open '" + path + "' for writing");
  write_csv(os, table);
  if (!os) throw Error(ErrorKind::io, kModule, "failed writing '" + path + "'");
}

CsvTable parse_csv(std::istream& is, const std::string& name) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (table.header.empty()) {
      table.header = cells;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::config, kModule,
                  name + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                      " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      const char* first = c.data();
      if (!c.empty() && c[0] == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, c.data() + c.size(), row[i]);
      if (c.empty() || ec != std::errc() || ptr != c.data() + c.size()) {
        throw Error(ErrorKind::config, kModule,
                    name + ":" + std::to_string(line_no) + ": '" + c + "' is not a number");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw Error(ErrorKind::config, kModule, name + ": missing header row");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, kModule, "cannot open '" + path + "' for reading");
  return parse_csv(is, path);
}

}  // namespace fracdu::cli
