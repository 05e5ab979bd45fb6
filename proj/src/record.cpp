#include "dlab/record.hpp"

#include <cmath>
#include <cstdio>

namespace dlab {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void Record::set(const std::string& key, const std::string& value) {
  for (auto& e : entries_) {
    if (e.first == key) {
      e.second = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

const std::string* Record::find(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.first == key) return &e.second;
  }
  return nullptr;
}

std::string Record::to_csv() const {
  std::string out = "key,value\n";
  for (const auto& [k, v] : entries_) out += csv_field(k) + "," + csv_field(v) + "\n";
  return out;
}

std::string Record::to_kv() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

std::string PlotData::to_csv() const {
  std::string out = x_label + "," + y_label + "\n";
  for (const auto& [x, y] : rows) out += format_number(x) + "," + format_number(y) + "\n";
  return out;
}

}  // namespace dlab
