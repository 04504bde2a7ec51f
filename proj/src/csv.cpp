#include "tdiff/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "tdiff/error.hpp"

namespace tdiff {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

void write_csv_row(std::ostream& out, const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    write_csv_row(out, cells);
}

namespace {

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw PreconditionError("not a number: \"" + s + "\"");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts.size() != 3) throw PreconditionError("grid must be MIN:MAX:N, got \"" + spec + "\"");
    double lo = parse_double(parts[0]);
    double hi = parse_double(parts[1]);
    double count = parse_double(parts[2]);
    if (!(count >= 2) || count != std::floor(count) || count > 1e7)
        throw PreconditionError("grid point count must be an integer >= 2");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw PreconditionError("grid bounds must be finite with MIN < MAX");
    auto n = static_cast<std::size_t>(count);
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = lo + (hi - lo) * double(i) / double(n - 1);
    grid.back() = hi;
    return grid;
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> values;
    for (const auto& part : split(spec, ',')) values.push_back(parse_double(part));
    return values;
}

}  // namespace tdiff
