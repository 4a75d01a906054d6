#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wii {

// Flat "key = value" text: one pair per line, '#' starts a comment, blank
// lines ignored, keys unique.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& values);

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

// Every key accepted by experiment/training config files.
std::span<const ConfigKey> config_keys();

// Typed accessors; malformed values raise a config error naming the key.
std::optional<std::string> get_string(const KeyValues& kv, const std::string& key);
std::optional<double> get_double(const KeyValues& kv, const std::string& key);
std::optional<long long> get_int(const KeyValues& kv, const std::string& key);
std::optional<bool> get_bool(const KeyValues& kv, const std::string& key);

// "-20:2:20" ranges or comma lists like "-10,0,10".
std::vector<int> parse_int_list(std::string_view text);
std::string format_int_list(const std::vector<int>& values);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace wii
