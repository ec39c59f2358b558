#include "wavemap/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wavemap/errors.hpp"

namespace wavemap {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "config line " << lineno << " is not key=value: '" << line << "'";
            throw ConfigError(os.str());
        }
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void KeyValueConfig::set(const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw ConfigError("empty config key");
    raw_[key] = value;
}

std::string KeyValueConfig::fetch(const std::string& key,
                                  const std::string& materialized_default) const {
    auto it = raw_.find(key);
    const std::string value = (it != raw_.end()) ? it->second : materialized_default;
    materialized_[key] = value;
    consumed_.insert(key);
    return value;
}

double KeyValueConfig::get_double(const std::string& key, double def) const {
    const std::string v = fetch(key, format_double(def));
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "' is not a real number: '" + v + "'");
    return x;
}

int KeyValueConfig::get_int(const std::string& key, int def) const {
    const std::string v = fetch(key, std::to_string(def));
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "' is not an integer: '" + v + "'");
    return static_cast<int>(x);
}

bool KeyValueConfig::get_bool(const std::string& key, bool def) const {
    const std::string v = fetch(key, def ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: '" + v + "'");
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& def) const {
    return fetch(key, def);
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key,
                                                    const std::vector<double>& def) const {
    std::string defstr;
    for (std::size_t i = 0; i < def.size(); ++i) {
        if (i) defstr += ",";
        defstr += format_double(def[i]);
    }
    const std::string v = fetch(key, defstr);
    std::vector<double> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        char* end = nullptr;
        const double x = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw ConfigError("config key '" + key + "' has a non-numeric entry: '" + item + "'");
        out.push_back(x);
    }
    return out;
}

void KeyValueConfig::require_all_consumed() const {
    std::string unknown;
    for (const auto& [k, v] : raw_) {
        if (!consumed_.count(k)) {
            if (!unknown.empty()) unknown += ", ";
            unknown += k;
        }
    }
    if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
}

std::string KeyValueConfig::echo() const {
    std::ostringstream os;
    for (const auto& [k, v] : materialized_) os << k << " = " << v << "\n";
    return os.str();
}

std::string KeyValueConfig::format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace wavemap
