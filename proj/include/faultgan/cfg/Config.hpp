#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <faultgan/io/Format.hpp>

namespace faultgan::cfg {

/// Flat `key = value` configuration document. '#' starts a comment.
/// Keys are kept sorted so serialized configs are byte-stable.
class Config {
public:
    Config() = default;

    static Config from_string(const std::string& text) {
        Config c;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = io::trim(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config: line " + std::to_string(lineno) +
                                         ": expected 'key = value'");
            const std::string key = io::trim(trimmed.substr(0, eq));
            const std::string value = io::trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error("config: line " + std::to_string(lineno) + ": empty key");
            c.values_[key] = value;
        }
        return c;
    }

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return from_string(buf.str());
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_str(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string require_str(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : io::parse_double(it->second);
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return static_cast<std::int64_t>(io::parse_double(it->second));
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void set(const std::string& key, double value) { values_[key] = io::format_double(value); }
    void set(const std::string& key, std::int64_t value) { values_[key] = std::to_string(value); }

    std::string to_string() const {
        std::string out;
        for (const auto& [k, v] : values_) {
            out += k;
            out += " = ";
            out += v;
            out += '\n';
        }
        return out;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("config: cannot write '" + path + "'");
        out << to_string();
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace faultgan::cfg
