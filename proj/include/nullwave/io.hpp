// Small text I/O helpers: round-trip number formatting and numeric CSV input.
#pragma once

#include <string>
#include <vector>

namespace nullwave {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Reads a comma-separated numeric table. Lines that do not parse as numbers
// (headers, comments starting with '#') are skipped; every data row must have
// exactly `columns` entries. Throws IoError.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t columns);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace nullwave
