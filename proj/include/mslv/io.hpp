#pragma once

#include <iosfwd>
#include <string>

#include "mslv/curve.hpp"
#include "mslv/gas.hpp"

namespace mslv {

// Load a gas either by built-in name ("methane") or from a JSON file.
// Recognized keys: name, a_r, b_r, c_r, d_r, omega, m (optional, derived
// from omega when absent), n (optional, default 6), Z, p_c_MPa,
// v_c_cm3mol, T_c_K. Unknown keys are ParseErrors, invariant violations
// ValidationErrors, soft mismatches end up in GasParameters::warnings.
GasParameters load_gas(const std::string& name_or_path);

// CSV: '#'-prefixed metadata lines, one header row of name[unit] cells,
// doubles at 17 significant digits, blank line between segments.
void write_csv(const CurveSeries& series, std::ostream& out);
void write_csv(const CurveSeries& series, const std::string& path);
CurveSeries read_csv(std::istream& in);
CurveSeries read_csv_file(const std::string& path);

// JSON mirror of the same payload (columns, rows, segments, metadata).
void write_json(const CurveSeries& series, std::ostream& out);
void write_json(const CurveSeries& series, const std::string& path);

// Full command-line entry point (argv-style). Returns the process exit
// code: 0 success, 2 validation/domain, 3 solver failure, 4 I/O.
int cli_main(int argc, const char* const* argv);

}  // namespace mslv
