#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace spliceglm {

// Shortest round-trip decimal form, '.' decimal point, locale independent.
std::string format_double(double v);

// A fully numeric table read from a headered CSV file.
struct Table {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;  // rows x columns
};

// Strict reader: comma separated, header mandatory, every cell a finite
// number, all rows the same width. Errors name the offending column and
// 1-based data row.
Table read_csv_table(const std::string& path);

}  // namespace spliceglm
