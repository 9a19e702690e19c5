#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace omc::io {

// INI file flattened to "section.key" -> raw value. Lines starting with '#'
// or ';' are comments; duplicate keys and keys outside a section are errors.
struct IniFile {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { values[key] = value; }
    // Canonical "section.key=value" lines in key order, for hashing.
    std::string canonical() const;
};

IniFile parse_ini(std::istream& in, const std::string& source = "<config>");
IniFile parse_ini_file(const std::string& path);

// Comma-separated list of doubles ("1, 2.5, 10").
std::vector<double> parse_double_list(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

}  // namespace omc::io
