#pragma once

// Run configuration merged from defaults, an optional plain-text config file
// (one `key = value` per line, `#` comments) and command-line flags. Flags
// override file values, file values override defaults.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "qlm/deutsch.hpp"
#include "qlm/errors.hpp"

namespace qlm {

struct RunConfiguration {
    int memory_size = 20;
    double step_scale = 0.7853981633974483;      // π/4
    double init_half_range = 3.141592653589793;  // π
    std::uint64_t max_iterations = 1000000;
    int trials = 1000;
    std::uint64_t master_seed = 1;
    std::vector<int> n_list = {10, 20, 40, 80};
    std::string out_path;
    bool baseline_mode = false;

    MachineConfig machine() const {
        MachineConfig cfg;
        cfg.memory_size = memory_size;
        cfg.step_scale = step_scale;
        cfg.init_half_range = init_half_range;
        cfg.max_iterations = max_iterations;
        cfg.baseline_mode = baseline_mode;
        return cfg;
    }

    void validate() const {
        machine().validate();
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (n_list.empty()) throw std::invalid_argument("n_list must not be empty");
        for (std::size_t i = 0; i < n_list.size(); ++i) {
            if (n_list[i] < 1) throw std::invalid_argument("n_list entries must be >= 1");
            if (i > 0 && n_list[i] <= n_list[i - 1])
                throw std::invalid_argument("n_list must be strictly ascending");
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

inline long long parse_int_value(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw std::invalid_argument("config key '" + key + "': malformed integer '" + value + "'");
    return v;
}

inline double parse_double_value(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw std::invalid_argument("config key '" + key + "': malformed number '" + value + "'");
    return v;
}

inline bool parse_bool_value(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key '" + key + "': expected true/false, got '" + value + "'");
}

} // namespace detail

/// Comma-separated ascending list of memory sizes, e.g. "10,20,40,80".
inline std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item =
            detail::trim(comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start));
        if (item.empty()) throw std::invalid_argument("n_list: empty entry in '" + text + "'");
        out.push_back(static_cast<int>(detail::parse_int_value("n_list", item)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Applies one `key = value` assignment to the configuration.
inline void apply_config_entry(RunConfiguration& cfg, const std::string& key, const std::string& value) {
    if (key == "memory_size")
        cfg.memory_size = static_cast<int>(detail::parse_int_value(key, value));
    else if (key == "step_scale")
        cfg.step_scale = detail::parse_double_value(key, value);
    else if (key == "init_half_range")
        cfg.init_half_range = detail::parse_double_value(key, value);
    else if (key == "max_iterations")
        cfg.max_iterations = static_cast<std::uint64_t>(detail::parse_int_value(key, value));
    else if (key == "trials")
        cfg.trials = static_cast<int>(detail::parse_int_value(key, value));
    else if (key == "master_seed")
        cfg.master_seed = static_cast<std::uint64_t>(detail::parse_int_value(key, value));
    else if (key == "n_list")
        cfg.n_list = parse_n_list(value);
    else if (key == "out_path")
        cfg.out_path = value;
    else if (key == "baseline_mode")
        cfg.baseline_mode = detail::parse_bool_value(key, value);
    else
        throw std::invalid_argument("unknown config key '" + key + "'");
}

/// Overlays `key = value` assignments from a config file onto cfg.
inline void load_config_file(RunConfiguration& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        apply_config_entry(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

} // namespace qlm
