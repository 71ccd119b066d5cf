#pragma once

// Scenario files: `[section]` headers and `key = value` lines, `#` comments.
// Every key is declared in a schema with its default, so typos are rejected
// and the fully resolved configuration can be echoed into outputs.

#include "starkmem/errors.hpp"

#include <json.hpp>

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace starkmem::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct ConfigKey {
    std::string section;
    std::string key;
    std::string default_value;
    std::string help;
};

const std::vector<ConfigKey>& config_schema();

class Config {
public:
    /// Schema defaults only.
    Config();

    static Config parse(std::istream& is, const std::string& source = "<config>");
    static Config load(const std::filesystem::path& path);

    /// Overrides a value (from a command-line flag). Throws ConfigError for unknown keys.
    void set(const std::string& section, const std::string& key, const std::string& value,
             const std::string& origin = "command line");

    const std::string& text(const std::string& section, const std::string& key) const;
    double number(const std::string& section, const std::string& key) const;
    int integer(const std::string& section, const std::string& key) const;
    /// Lowercase value checked against `allowed`.
    std::string choice(const std::string& section, const std::string& key,
                       const std::vector<std::string>& allowed) const;
    std::vector<double> numbers(const std::string& section, const std::string& key) const;

    /// {section: {key: value}} for every schema key, values as written.
    nlohmann::ordered_json resolved() const;

private:
    struct Entry {
        std::string value;
        std::string origin;  // "default", "file:line" or "command line"
    };
    const Entry& entry(const std::string& section, const std::string& key) const;
    [[noreturn]] void bad_value(const std::string& section, const std::string& key,
                                const std::string& why) const;

    std::map<std::pair<std::string, std::string>, Entry> values_;
};

}  // namespace starkmem::cli
