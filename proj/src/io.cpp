#include "nullwave/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    std::string cell = line.substr(pos, end - pos);
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    if (first == std::string::npos) return false;
    cell = cell.substr(first, last - first + 1);
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) return false;
    out.push_back(v);
    pos = end + 1;
  }
  return true;
}

}  // namespace

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> row;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!parse_row(line, row)) {
      if (rows.empty()) continue;  // header
      raise(ErrorKind::IoError, path + ":" + std::to_string(line_no) + ": not numeric");
    }
    if (row.size() != columns) {
      raise(ErrorKind::IoError, path + ":" + std::to_string(line_no) + ": expected " +
                                    std::to_string(columns) + " columns");
    }
    rows.push_back(row);
  }
  if (rows.empty()) raise(ErrorKind::IoError, path + ": no data rows");
  return rows;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::IoError, "cannot write " + path);
  out << contents;
  if (!out) raise(ErrorKind::IoError, "write failed for " + path);
}

}  // namespace nullwave
