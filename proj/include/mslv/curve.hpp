#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace mslv {

// Tabulated curve ready for export: named columns with units, rows of
// doubles, optional segment breaks (CSV renders them as blank lines, e.g.
// the two branches of an isotherm), and free-form metadata echoed into the
// output header. No timestamps anywhere; identical inputs must reproduce
// identical files byte for byte.
struct CurveSeries {
    struct Column {
        std::string name;
        std::string unit;  // empty for dimensionless
    };

    std::string name;
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> segment_starts;  // row indices > 0 opening a new segment
    std::map<std::string, std::string> metadata;

    void add_row(std::vector<double> row);
    void break_segment();  // next added row starts a new segment
};

}  // namespace mslv
