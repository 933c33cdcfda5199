#include "preytaxis/report.hpp"

#include "preytaxis/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>

namespace preytaxis {

std::string format_number(double value, int digits) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, digits);
    return std::string(buf.data(), res.ptr);
}

void write_csv_row(std::ostream& os, const std::vector<double>& values, int digits) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_number(values[i], digits);
    }
    os << '\n';
}

std::ofstream open_output(const std::string& path) {
    const std::filesystem::path fp(path);
    std::error_code ec;
    if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path(), ec);
    std::ofstream out(fp);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot open output file " + path);
    return out;
}

}  // namespace preytaxis
