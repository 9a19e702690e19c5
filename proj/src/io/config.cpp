#include "omc/io/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "omc/errors.hpp"
#include "omc/io/csv.hpp"

namespace omc::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string IniFile::canonical() const {
    std::string out;
    for (const auto& [k, v] : values) out += k + "=" + v + "\n";
    return out;
}

IniFile parse_ini(std::istream& in, const std::string& source) {
    // The ptree parser only knows ';' comments.
    std::stringstream cleaned;
    std::string raw;
    while (std::getline(in, raw)) {
        const auto t = trim(raw);
        cleaned << (t.rfind('#', 0) == 0 ? std::string() : raw) << '\n';
    }
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(cleaned, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    IniFile ini;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ValidationError(source + ": key '" + section + "' outside of any [section]");
        for (const auto& [key, value] : body) ini.values[section + "." + key] = trim(value.data());
    }
    return ini;
}

IniFile parse_ini_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    return parse_ini(in, path);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, what));
    }
    return out;
}

bool parse_bool(const std::string& text, const std::string& what) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ValidationError(what + ": '" + t + "' is not a boolean");
}

}  // namespace omc::io
