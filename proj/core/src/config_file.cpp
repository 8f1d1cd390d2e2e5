#include "xcfb/config_file.hpp"

#include <fstream>
#include <sstream>

#include "xcfb/errors.hpp"

namespace xcfb {
namespace {

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
    return entries_.contains(key);
}

std::string KeyValueConfig::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string KeyValueConfig::get_string_or(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

long long KeyValueConfig::get_int(const std::string& key) const {
    try {
        return std::stoll(get_string(key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config key " + key + ": not an integer");
    }
}

long long KeyValueConfig::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    try {
        return std::stod(get_string(key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config key " + key + ": not a number");
    }
}

std::uint64_t KeyValueConfig::get_u64_or(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    try {
        return std::stoull(get_string(key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config key " + key + ": not an unsigned integer");
    }
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get_string(key));
    std::string token;
    while (std::getline(in, token, ',')) {
        token = strip(token);
        if (token.empty()) continue;
        try {
            out.push_back(std::stod(token));
        } catch (const std::invalid_argument&) {
            throw ConfigError("config key " + key + ": bad list entry '" + token + "'");
        }
    }
    return out;
}

}  // namespace xcfb
