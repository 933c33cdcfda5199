#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace preytaxis {

/// Locale-independent general formatting with `digits` significant digits.
std::string format_number(double value, int digits = 9);

/// Comma-joined values, newline-terminated.
void write_csv_row(std::ostream& os, const std::vector<double>& values, int digits = 9);

/// Opens `path` for writing, creating parent directories. Throws ConfigError on failure.
std::ofstream open_output(const std::string& path);

}  // namespace preytaxis
