#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mmdiff {

// Sectioned key-value configuration text:
//
//   # comment
//   [section]
//   key = value      # trailing comment
//
// Section and key order is preserved on round-trip.  Values are stored as
// trimmed strings; typed accessors parse on demand and throw ConfigError with
// the offending section/key on failure.
class Config {
 public:
  struct Entry {
    std::string key;
    std::string value;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };

  Config() = default;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  std::string str() const;
  void save(const std::string& path) const;

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  const std::string& get_string(const std::string& section,
                                const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  std::int64_t get_int(const std::string& section,
                       const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  std::int64_t get_int_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const;

  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;

  // Inserts or overwrites; creates the section if absent.
  void set(const std::string& section, const std::string& key,
           const std::string& value);
  void set(const std::string& section, const std::string& key, double value);
  void set(const std::string& section, const std::string& key,
           std::int64_t value);
  void set(const std::string& section, const std::string& key, bool value);

  const std::vector<Section>& sections() const { return sections_; }

  // Keys present in `section` (empty if the section is absent).
  std::vector<std::string> keys(const std::string& section) const;

 private:
  const std::string* find(const std::string& section,
                          const std::string& key) const;

  std::vector<Section> sections_;
};

// Formats with six significant digits, the fixed precision of all numeric
// text output in this project.
std::string format_sig6(double value);

}  // namespace mmdiff
