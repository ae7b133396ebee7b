#include "vcnet/keyvalue.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "csv_util.hpp"
#include "vcnet/error.hpp"

namespace vcnet {

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw SchemaError(fmt::format("line {}: expected 'key = value'", line_no));
    }
    std::string key(detail::trim(text.substr(0, eq)));
    std::string value(detail::trim(text.substr(eq + 1)));
    if (key.empty()) throw SchemaError(fmt::format("line {}: empty key", line_no));
    if (!config.entries_.emplace(key, std::move(value)).second) {
      throw SchemaError(fmt::format("line {}: key '{}' repeated", line_no, key));
    }
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(fmt::format("cannot open '{}'", path));
  return parse(in);
}

bool KeyValueConfig::has(std::string_view key) const { return entries_.contains(key); }

const std::string& KeyValueConfig::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw LookupError(fmt::format("missing key '{}'", key));
  return it->second;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? std::move(fallback) : it->second;
}

void KeyValueConfig::require_known(std::initializer_list<std::string_view> known) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw SchemaError(fmt::format("unknown key '{}'", key));
    }
  }
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    auto piece = detail::trim(text.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end + 1;
  }
  return out;
}

}  // namespace vcnet
