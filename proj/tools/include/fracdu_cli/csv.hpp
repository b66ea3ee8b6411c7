#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracdu::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a header column, or -1.
  int column(const std::string& name) const;
};

/// Shortest decimal text that reads back to the same double; nan/inf spelled out.
std::string format_number(double v);

void write_csv(std::ostream& os, const CsvTable& table);
/// Throws Error(io) when the file cannot be written.
void write_csv(const std::string& path, const CsvTable& table);

/// Header row required; every cell numeric. Throws Error(io) for unreadable
/// files and Error(config) for malformed content.
CsvTable parse_csv(std::istream& is, const std::string& name);
CsvTable read_csv(const std::string& path);

}  // namespace fracdu::cli
