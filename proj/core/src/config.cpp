#include "wii/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wii/error.hpp"

namespace wii {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

constexpr std::array kKeys{
    ConfigKey{"repr", "feature representation: time-iq | freq-iq | freq-amp-phase"},
    ConfigKey{"band", "absolute MHz sub-bands, e.g. 2422-2424,2429-2431 (empty = full capture)"},
    ConfigKey{"train_snr", "keep only training records at this SNR in dB (empty = all)"},
    ConfigKey{"pca_rate", "keep round(rate*L) component pairs of a PCA fitted on training data"},
    ConfigKey{"subsample", "row subsampling method: random | uniform | hmr"},
    ConfigKey{"subsample_rate", "fraction of feature rows kept by subsampling"},
    ConfigKey{"arch", "network: proposed | baseline"},
    ConfigKey{"dropout_after_conv1", "also apply dropout after the first convolution (true | false)"},
    ConfigKey{"lr", "Adam learning rate"},
    ConfigKey{"beta1", "Adam first-moment decay"},
    ConfigKey{"beta2", "Adam second-moment decay"},
    ConfigKey{"epsilon", "Adam epsilon"},
    ConfigKey{"batch_size", "mini-batch size"},
    ConfigKey{"dropout", "dropout rate"},
    ConfigKey{"patience", "epochs without validation-loss improvement before stopping"},
    ConfigKey{"max_epochs", "upper bound on training epochs"},
    ConfigKey{"vectors_per_cell", "records generated per (class, SNR) cell"},
    ConfigKey{"snrs", "SNR list in dB, as lo:step:hi or comma separated"},
};

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::config, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw Error(ErrorCode::config, "line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw Error(ErrorCode::config, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

std::string format_key_values(const KeyValues& values) {
  std::string out;
  for (const auto& [k, v] : values) out += k + " = " + v + "\n";
  return out;
}

std::span<const ConfigKey> config_keys() { return kKeys; }

std::optional<std::string> get_string(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) return std::nullopt;
  return it->second;
}

std::optional<double> get_double(const KeyValues& kv, const std::string& key) {
  const auto s = get_string(kv, key);
  if (!s || s->empty()) return std::nullopt;
  const auto number = [](std::string_view t, double& v) {
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    return !t.empty() && ec == std::errc() && ptr == t.data() + t.size();
  };
  const std::string_view text(*s);
  double v = 0.0;
  if (number(text, v)) return v;
  // fractions such as 1/16
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    double n = 0.0;
    double d = 0.0;
    if (number(text.substr(0, slash), n) && number(text.substr(slash + 1), d) && d != 0.0) return n / d;
  }
  throw Error(ErrorCode::config, "key '" + key + "': '" + *s + "' is not a number");
}

std::optional<long long> get_int(const KeyValues& kv, const std::string& key) {
  const auto s = get_string(kv, key);
  if (!s || s->empty()) return std::nullopt;
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc() || ptr != s->data() + s->size()) {
    throw Error(ErrorCode::config, "key '" + key + "': '" + *s + "' is not an integer");
  }
  return v;
}

std::optional<bool> get_bool(const KeyValues& kv, const std::string& key) {
  const auto s = get_string(kv, key);
  if (!s || s->empty()) return std::nullopt;
  if (*s == "true" || *s == "1" || *s == "yes") return true;
  if (*s == "false" || *s == "0" || *s == "no") return false;
  throw Error(ErrorCode::config, "key '" + key + "': '" + *s + "' is not a boolean");
}

std::vector<int> parse_int_list(std::string_view text) {
  const auto to_int = [&](std::string_view part) {
    part = trim(part);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw Error(ErrorCode::config, "bad integer list '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<int> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw Error(ErrorCode::config, "range must be lo:step:hi");
    const int lo = to_int(text.substr(0, a));
    const int step = to_int(text.substr(a + 1, b - a - 1));
    const int hi = to_int(text.substr(b + 1));
    if (step <= 0 || hi < lo) throw Error(ErrorCode::config, "bad range '" + std::string(text) + "'");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find(',', pos), text.size());
    out.push_back(to_int(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

std::string format_int_list(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace wii
