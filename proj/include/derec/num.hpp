#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "derec/error.hpp"

namespace derec {

// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline bool try_parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

inline double parse_double(std::string_view text, const std::string& where) {
    double v = 0.0;
    if (!try_parse_double(text, v)) {
        throw ParseError("invalid numeric value '" + std::string(text) + "' in " + where);
    }
    return v;
}

inline long long parse_int(std::string_view text, const std::string& where) {
    long long v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw ParseError("invalid integer value '" + std::string(text) + "' in " + where);
    }
    return v;
}

}  // namespace derec
