#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace isac::cli {

/// Shortest round-trip decimal form; locale independent. NaN prints empty.
inline std::string fmt(double v) {
    if (std::isnan(v)) return {};
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += fmt(values[i]);
    }
    return out;
}

}  // namespace isac::cli
