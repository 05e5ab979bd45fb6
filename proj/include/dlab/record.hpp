#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dlab {

/// %.12g, with "nan"/"inf" spelled out.
std::string format_number(double x);

/// Ordered key/value report. Keys keep insertion order; setting an existing
/// key overwrites it in place.
class Record {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, double value) { set(key, format_number(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }
  void set(const std::string& key, long value) { set(key, std::to_string(value)); }
  void set(const std::string& key, long long value) { set(key, std::to_string(value)); }
  void set(const std::string& key, unsigned long value) { set(key, std::to_string(value)); }
  void set(const std::string& key, unsigned long long value) { set(key, std::to_string(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

  const std::string* find(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Header `key,value`, one row per entry, RFC 4180 quoting where needed.
  std::string to_csv() const;
  /// One `key = value` line per entry.
  std::string to_kv() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Two-column plot data, written as CSV with a header row.
struct PlotData {
  std::string x_label = "n";
  std::string y_label = "value";
  std::vector<std::pair<double, double>> rows;

  std::string to_csv() const;
};

}  // namespace dlab
