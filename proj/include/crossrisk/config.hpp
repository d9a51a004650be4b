#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "crossrisk/structure.hpp"

namespace crossrisk {

// Parse or validation failure in a key=value config; messages carry the
// 1-based source line.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct ConfigEntry {
    std::string value;
    int line;
};

// Flat key=value file: blank lines and '#' comments ignored, keys unique.
using ConfigMap = std::map<std::string, ConfigEntry>;

ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::string& path);

// Numeric scalar or grid: "x", comma list "a,b,c", or inclusive range
// "lo:hi:step". The key and line feed error messages.
std::vector<double> parse_number_list(const std::string& key, const ConfigEntry& entry);

double parse_number(const std::string& key, const ConfigEntry& entry);
long long parse_integer(const std::string& key, const ConfigEntry& entry);

}  // namespace crossrisk
