#pragma once

// `key = value` config text: one entry per line, '#' starts a comment,
// blank lines ignored, keys unique.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vcnet {

class KeyValueConfig {
 public:
  /// Throws SchemaError on a line without '=' or a repeated key.
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig load(const std::string& path);

  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;  // LookupError if absent
  std::string get_or(std::string_view key, std::string fallback) const;

  /// Throws SchemaError naming the first key not in `known`.
  void require_known(std::initializer_list<std::string_view> known) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

/// Splits on `sep`, trims each piece, drops empty pieces.
std::vector<std::string> split_list(std::string_view text, char sep = ',');

}  // namespace vcnet
