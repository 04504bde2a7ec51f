#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tdiff {

// 17 significant digits, locale independent, "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);

// Comma-separated row terminated by a single LF.
void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);
void write_csv_row(std::ostream& out, const std::vector<double>& values);

// Parses "MIN:MAX:N" into N equally spaced points including both ends (N >= 2, MIN < MAX).
std::vector<double> parse_grid(const std::string& spec);

// Parses "v1,v2,..." into numbers.
std::vector<double> parse_list(const std::string& spec);

}  // namespace tdiff
