#pragma once

#include <string>
#include <vector>

namespace pcmwall {

// Shortest decimal form that parses back to the exact same double;
// locale-independent.
std::string format_double(double v);

// One CSV line from already formatted fields (no quoting rules needed for
// numeric tables; fields containing commas are rejected).
std::string csv_join(const std::vector<std::string>& fields);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Strict reader for the numeric tables this project writes: first line is
// the header, every following line must hold one double per column.
CsvTable read_csv(const std::string& text);

} // namespace pcmwall
