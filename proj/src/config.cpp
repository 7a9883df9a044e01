#include "stokesim/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "stokesim/errors.hpp"

namespace stokesim {

namespace {
std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}
} // namespace

Config Config::parse(std::istream &in) {
    Config cfg;
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos)
            line = line.substr(0, comment);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(lineno) + ": unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty())
                throw ValidationError("config line " + std::to_string(lineno) + ": empty section name");
            // materialize the section even if it stays empty
            cfg.set(current, std::string(), std::string());
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
        cfg.set(current, key, trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config Config::parse_string(const std::string &text) {
    std::istringstream in(text);
    return parse(in);
}

Config Config::parse_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file " + path);
    return parse(in);
}

std::string Config::serialize() const {
    std::string out;
    bool first = true;
    for (const auto &sec : sections_) {
        if (!first)
            out += "\n";
        first = false;
        if (!sec.name.empty())
            out += "[" + sec.name + "]\n";
        for (const auto &e : sec.entries)
            out += e.key + " = " + e.value + "\n";
    }
    return out;
}

void Config::set(const std::string &section, const std::string &key, const std::string &value) {
    Section *sec = nullptr;
    for (auto &s : sections_)
        if (s.name == section)
            sec = &s;
    if (!sec) {
        sections_.push_back({section, {}});
        sec = &sections_.back();
    }
    if (key.empty())
        return;
    for (auto &e : sec->entries)
        if (e.key == key) {
            e.value = value;
            return;
        }
    sec->entries.push_back({key, value});
}

void Config::set_double(const std::string &section, const std::string &key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    set(section, key, buf);
}

const std::string *Config::find(const std::string &section, const std::string &key) const {
    for (const auto &s : sections_)
        if (s.name == section)
            for (const auto &e : s.entries)
                if (e.key == key)
                    return &e.value;
    return nullptr;
}

bool Config::has(const std::string &section, const std::string &key) const { return find(section, key) != nullptr; }

std::string Config::get(const std::string &section, const std::string &key) const {
    const std::string *v = find(section, key);
    if (!v)
        throw ValidationError("config is missing [" + section + "] " + key);
    return *v;
}

std::string Config::get(const std::string &section, const std::string &key, const std::string &fallback) const {
    const std::string *v = find(section, key);
    return v ? *v : fallback;
}

double Config::get_double(const std::string &section, const std::string &key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception &) {
        throw ValidationError("config [" + section + "] " + key + ": not a number: " + v);
    }
}

double Config::get_double(const std::string &section, const std::string &key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string &section, const std::string &key, std::int64_t fallback) const {
    if (!has(section, key))
        return fallback;
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const std::int64_t i = std::stoll(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception &) {
        throw ValidationError("config [" + section + "] " + key + ": not an integer: " + v);
    }
}

bool Config::get_bool(const std::string &section, const std::string &key, bool fallback) const {
    if (!has(section, key))
        return fallback;
    const std::string v = get(section, key);
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ValidationError("config [" + section + "] " + key + ": not a boolean: " + v);
}

Vec3 Config::get_vec3(const std::string &section, const std::string &key, const Vec3 &fallback) const {
    if (!has(section, key))
        return fallback;
    const auto parts = get_list(section, key);
    if (parts.size() != 3)
        throw ValidationError("config [" + section + "] " + key + ": expected three comma-separated numbers");
    return {parts[0], parts[1], parts[2]};
}

std::vector<double> Config::get_list(const std::string &section, const std::string &key) const {
    const std::string v = get(section, key);
    std::vector<double> out;
    std::istringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty())
            continue;
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception &) {
            throw ValidationError("config [" + section + "] " + key + ": not a number list: " + v);
        }
    }
    return out;
}

bool Config::operator==(const Config &other) const {
    if (sections_.size() != other.sections_.size())
        return false;
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        if (sections_[i].name != other.sections_[i].name ||
            sections_[i].entries.size() != other.sections_[i].entries.size())
            return false;
        for (std::size_t j = 0; j < sections_[i].entries.size(); ++j)
            if (sections_[i].entries[j].key != other.sections_[i].entries[j].key ||
                sections_[i].entries[j].value != other.sections_[i].entries[j].value)
                return false;
    }
    return true;
}

} // namespace stokesim
