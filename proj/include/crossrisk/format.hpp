#pragma once

#include <charconv>
#include <string>

namespace crossrisk {

// Shortest round-trip decimal form; stable across runs, used for all CSV and
// CLI numeric output so identical inputs give byte-identical files.
inline std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt(long long v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fixed-decimals view used for the paper-style rounded tables.
std::string fmt_fixed(double v, int decimals);

// Round half away from zero at the given number of decimals.
double round_to(double v, int decimals);

}  // namespace crossrisk
