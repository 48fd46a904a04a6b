#include "spliceglm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "spliceglm/errors.hpp"

namespace spliceglm {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        // trim surrounding whitespace
        const auto a = cell.find_first_not_of(" \t");
        const auto b = cell.find_last_not_of(" \t");
        out.push_back(a == std::string::npos ? std::string() : cell.substr(a, b - a + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

Table read_csv_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw InvalidInputError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    Table table;
    table.columns = split_csv_line(line);
    const std::size_t width = table.columns.size();
    for (std::size_t j = 0; j < width; ++j) {
        if (table.columns[j].empty())
            throw InvalidInputError("'" + path + "': header column " + std::to_string(j + 1) +
                                    " is empty");
    }

    std::vector<double> cells;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        ++rows;
        if (fields.size() != width)
            throw InvalidInputError("'" + path + "': row " + std::to_string(rows) + " has " +
                                    std::to_string(fields.size()) + " cells, expected " +
                                    std::to_string(width));
        for (std::size_t j = 0; j < width; ++j) {
            double v = 0.0;
            const std::string& cell = fields[j];
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() ||
                !std::isfinite(v))
                throw InvalidInputError("'" + path + "': column '" + table.columns[j] +
                                        "', row " + std::to_string(rows) +
                                        ": cannot parse '" + cell + "' as a finite number");
            cells.push_back(v);
        }
    }
    if (rows == 0) throw InvalidInputError("'" + path + "' has no data rows");

    table.values.resize(rows, width);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < width; ++j) table.values(i, j) = cells[i * width + j];
    return table;
}

}  // namespace spliceglm
