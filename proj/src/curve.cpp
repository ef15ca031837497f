#include "mslv/curve.hpp"

#include <stdexcept>

namespace mslv {

void CurveSeries::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::logic_error("CurveSeries: row width does not match schema");
    rows.push_back(std::move(row));
}

void CurveSeries::break_segment() {
    if (!rows.empty()) segment_starts.push_back(rows.size());
}

}  // namespace mslv
