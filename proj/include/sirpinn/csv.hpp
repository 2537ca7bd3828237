#pragma once

#include <string>
#include <vector>

namespace sirpinn {

/// Minimal CSV support: comma-separated, first row is the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
    double number(std::size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Shortest round-trip formatting, used everywhere numbers are serialized.
std::string format_double(double v);

}  // namespace sirpinn
