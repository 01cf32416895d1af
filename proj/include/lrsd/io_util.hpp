#pragma once

#include <charconv>
#include <stdexcept>
#include <string>

namespace lrsd {

/// Shortest decimal string that round-trips the double exactly. Keeps CSV
/// and JSON outputs byte-deterministic.
inline std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

} // namespace lrsd
