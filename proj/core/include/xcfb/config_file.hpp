#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace xcfb {

// Flat key = value text format. '#' starts a comment, blank lines ignored,
// keys are single tokens, values run to end of line.
class KeyValueConfig {
  public:
    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long fallback) const;
    double get_double_or(const std::string& key, double fallback) const;
    std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
    // Comma-separated list of numbers.
    std::vector<double> get_double_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

}  // namespace xcfb
