#pragma once

#include <map>
#include <string>
#include <vector>

namespace nlop {

/// Flat sectioned key-value configuration:
///
///   # comment
///   [section]
///   key = value
///
/// Keys are addressed as "section.key" (or bare "key" before any section
/// header). Parse errors carry the origin and line number.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// All keys, sorted.
  std::vector<std::string> keys() const;

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

 private:
  const std::string& raw(const std::string& key) const;

  std::map<std::string, std::string> entries_;
  std::string origin_;
};

}  // namespace nlop
