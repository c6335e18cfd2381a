#include "mmdiff/core/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mmdiff/core/error.hpp"

namespace mmdiff {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  const std::size_t pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": empty section name");
      if (!cfg.has_section(current))
        cfg.sections_.push_back(Section{current, {}});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    if (current.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    cfg.set(current, key, value);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string Config::str() const {
  std::ostringstream out;
  bool first = true;
  for (const Section& sec : sections_) {
    if (!first) out << "\n";
    first = false;
    out << "[" << sec.name << "]\n";
    for (const Entry& e : sec.entries) out << e.key << " = " << e.value << "\n";
  }
  return out.str();
}

void Config::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << str();
}

bool Config::has_section(const std::string& section) const {
  for (const Section& sec : sections_)
    if (sec.name == section) return true;
  return false;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const std::string* Config::find(const std::string& section,
                                const std::string& key) const {
  for (const Section& sec : sections_) {
    if (sec.name != section) continue;
    for (const Entry& e : sec.entries)
      if (e.key == key) return &e.value;
  }
  return nullptr;
}

const std::string& Config::get_string(const std::string& section,
                                      const std::string& key) const {
  const std::string* v = find(section, key);
  if (!v) throw ConfigError("missing config value: " + where(section, key));
  return *v;
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
  const std::string& v = get_string(section, key);
  try {
    std::size_t consumed = 0;
    const double x = std::stod(v, &consumed);
    if (consumed != v.size())
      throw ConfigError("not a number: " + where(section, key) + " = " + v);
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("not a number: " + where(section, key) + " = " + v);
  }
}

std::int64_t Config::get_int(const std::string& section,
                             const std::string& key) const {
  const std::string& v = get_string(section, key);
  std::int64_t x = 0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(begin, end, x);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("not an integer: " + where(section, key) + " = " + v);
  return x;
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
  const std::string& v = get_string(section, key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("not a boolean: " + where(section, key) + " = " + v);
}

std::string Config::get_string_or(const std::string& section,
                                  const std::string& key,
                                  const std::string& fallback) const {
  const std::string* v = find(section, key);
  return v ? *v : fallback;
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int_or(const std::string& section,
                                const std::string& key,
                                std::int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
  return has(section, key) ? get_bool(section, key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  const std::string& v = get_string(section, key);
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty())
      throw ConfigError("empty list element: " + where(section, key));
    try {
      std::size_t consumed = 0;
      const double x = std::stod(t, &consumed);
      if (consumed != t.size()) throw std::invalid_argument(t);
      out.push_back(x);
    } catch (const std::exception&) {
      throw ConfigError("not a number list: " + where(section, key) + " = " +
                        v);
    }
  }
  if (out.empty())
    throw ConfigError("empty list: " + where(section, key));
  return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  for (Section& sec : sections_) {
    if (sec.name != section) continue;
    for (Entry& e : sec.entries) {
      if (e.key == key) {
        e.value = value;
        return;
      }
    }
    sec.entries.push_back(Entry{key, value});
    return;
  }
  sections_.push_back(Section{section, {Entry{key, value}}});
}

void Config::set(const std::string& section, const std::string& key,
                 double value) {
  set(section, key, format_sig6(value));
}

void Config::set(const std::string& section, const std::string& key,
                 std::int64_t value) {
  set(section, key, std::to_string(value));
}

void Config::set(const std::string& section, const std::string& key,
                 bool value) {
  set(section, key, std::string(value ? "true" : "false"));
}

std::vector<std::string> Config::keys(const std::string& section) const {
  std::vector<std::string> out;
  for (const Section& sec : sections_) {
    if (sec.name != section) continue;
    for (const Entry& e : sec.entries) out.push_back(e.key);
  }
  return out;
}

std::string format_sig6(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return std::string(buf);
}

}  // namespace mmdiff
