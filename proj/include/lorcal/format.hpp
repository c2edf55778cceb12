#pragma once

// Shortest round-trip number formatting and strict parsing.

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "lorcal/core.hpp"

namespace lorcal {

inline std::string formatDouble(double v) {
    if (isInfinite(v)) return "inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string formatPoint(const Point& p) {
    return "(" + formatDouble(p.t) + ", " + formatDouble(p.x) + ")";
}

inline double parseDouble(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s == "inf" || s == "+inf") return kInfinity;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline std::size_t parseIndex(std::string_view s) {
    std::size_t v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("not a node index: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace lorcal
