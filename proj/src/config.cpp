#include "crossrisk/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace crossrisk {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& key, int line, std::string_view token) {
    const std::string text{trim(token)};
    if (text.empty()) fail(line, "empty number in '" + key + "'");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        fail(line, "bad number '" + text + "' in '" + key + "'");
    }
    return v;
}

}  // namespace

ConfigMap parse_config_text(std::string_view text) {
    ConfigMap out;
    int line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line;

        const auto hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view content = trim(raw);
        if (content.empty()) continue;

        const auto eq = content.find('=');
        if (eq == std::string_view::npos) fail(line, "expected key=value");
        const std::string key{trim(content.substr(0, eq))};
        const std::string value{trim(content.substr(eq + 1))};
        if (key.empty()) fail(line, "missing key before '='");
        if (value.empty()) fail(line, "missing value for '" + key + "'");
        if (!out.emplace(key, ConfigEntry{value, line}).second) {
            fail(line, "duplicate key '" + key + "'");
        }
    }
    return out;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::vector<double> parse_number_list(const std::string& key, const ConfigEntry& entry) {
    const std::string& v = entry.value;
    if (v.find(':') != std::string::npos) {
        const auto c1 = v.find(':');
        const auto c2 = v.find(':', c1 + 1);
        if (c2 == std::string::npos || v.find(':', c2 + 1) != std::string::npos) {
            fail(entry.line, "range in '" + key + "' must be lo:hi:step");
        }
        const double lo = to_double(key, entry.line, v.substr(0, c1));
        const double hi = to_double(key, entry.line, v.substr(c1 + 1, c2 - c1 - 1));
        const double step = to_double(key, entry.line, v.substr(c2 + 1));
        if (!(step > 0.0) || hi < lo) {
            fail(entry.line, "range in '" + key + "' needs lo <= hi and step > 0");
        }
        // Half-step slack keeps accumulated rounding from dropping hi itself.
        const auto count = static_cast<long long>((hi - lo) / step + 0.5) + 1;
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(count));
        for (long long i = 0; i < count; ++i) {
            double x = lo + static_cast<double>(i) * step;
            if (x > hi + 0.5 * step) break;
            if (std::fabs(x - hi) <= 1e-9 * step) x = hi;
            out.push_back(x);
        }
        return out;
    }

    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = v.find(',', start);
        out.push_back(to_double(key, entry.line,
                                std::string_view(v).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_number(const std::string& key, const ConfigEntry& entry) {
    return to_double(key, entry.line, entry.value);
}

long long parse_integer(const std::string& key, const ConfigEntry& entry) {
    const double v = parse_number(key, entry);
    const auto n = static_cast<long long>(v);
    if (static_cast<double>(n) != v) {
        fail(entry.line, "'" + key + "' must be an integer");
    }
    return n;
}

}  // namespace crossrisk
