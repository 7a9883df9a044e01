#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stokesim/geometry.hpp"

namespace stokesim {

/// Flat INI-style configuration: [section] headers over key = value lines,
/// '#' or ';' comments.  Sections and keys keep insertion order, so
/// parse -> serialize -> parse is the identity on the parsed content.
class Config {
  public:
    static Config parse(std::istream &in);
    static Config parse_string(const std::string &text);
    static Config parse_file(const std::string &path);

    std::string serialize() const;

    bool has(const std::string &section, const std::string &key) const;
    void set(const std::string &section, const std::string &key, const std::string &value);
    void set_double(const std::string &section, const std::string &key, double value);

    /// Throwing getters (ValidationError when missing or malformed).
    std::string get(const std::string &section, const std::string &key) const;
    /// Defaulted getters.
    std::string get(const std::string &section, const std::string &key, const std::string &fallback) const;
    double get_double(const std::string &section, const std::string &key, double fallback) const;
    double get_double(const std::string &section, const std::string &key) const;
    std::int64_t get_int(const std::string &section, const std::string &key, std::int64_t fallback) const;
    bool get_bool(const std::string &section, const std::string &key, bool fallback) const;
    Vec3 get_vec3(const std::string &section, const std::string &key, const Vec3 &fallback) const;
    std::vector<double> get_list(const std::string &section, const std::string &key) const;

    bool operator==(const Config &other) const;

  private:
    struct Entry {
        std::string key;
        std::string value;
    };
    struct Section {
        std::string name;
        std::vector<Entry> entries;
    };
    const std::string *find(const std::string &section, const std::string &key) const;
    std::vector<Section> sections_;
};

} // namespace stokesim
