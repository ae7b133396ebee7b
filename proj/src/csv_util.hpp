#pragma once

// Minimal RFC 4180 helpers shared by the CSV reader and writers.

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace vcnet::detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Reads one logical record, joining physical lines while a quoted field is
/// open. `line_no` ends on the record's last physical line.
inline bool read_record(std::istream& in, std::string& record, std::size_t& line_no) {
  record.clear();
  std::string physical;
  bool open = false;
  while (std::getline(in, physical)) {
    ++line_no;
    if (!physical.empty() && physical.back() == '\r') physical.pop_back();
    if (!record.empty() || open) record += '\n';
    record += physical;
    for (char c : physical) {
      if (c == '"') open = !open;
    }
    if (!open) return true;
  }
  return !record.empty();
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          fields.back() += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

inline std::string quote_csv(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace vcnet::detail
