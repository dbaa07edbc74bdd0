#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace faultgan::io {

/// Shortest decimal text that parses back to the identical double.
/// Locale independent, so emitted artifacts are byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::runtime_error("parse_double: invalid number '" + std::string(text) + "'");
    return v;
}

inline std::string trim(std::string_view s) {
    const auto notspace = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    std::size_t b = 0, e = s.size();
    while (b < e && !notspace(s[b])) ++b;
    while (e > b && !notspace(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace faultgan::io
