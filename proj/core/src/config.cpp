#include "besovch/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace besovch {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end && !text.empty();
}

template <class T>
std::vector<T> parse_list(std::string_view text, const std::string& what) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) throw ConfigError(what, "empty list");
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(',', pos);
    const auto item = trim(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    T v{};
    if (!parse_number(item, v)) throw ConfigError(what, "cannot parse list item '" + std::string(item) + "'");
    out.push_back(v);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text, const std::string& what) { return parse_list<int>(text, what); }

std::vector<double> parse_double_list(std::string_view text, const std::string& what) {
  return parse_list<double>(text, what);
}

double parse_double(std::string_view text, const std::string& what) {
  double v = 0.0;
  if (!parse_number(text, v)) throw ConfigError(what, "expected a number, got '" + std::string(trim(text)) + "'");
  return v;
}

Config Config::parse(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find('\n', pos);
    const auto raw = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    ++line_no;
    const auto line = trim(raw);
    if (!line.empty() && line.front() != '#') {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError(std::string(line), "line " + std::to_string(line_no) + " is not of the form key = value");
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + " has an empty key");
      if (cfg.entries_.count(key) != 0) throw ConfigError(key, "duplicate entry on line " + std::to_string(line_no));
      cfg.entries_.emplace(key, value);
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<std::string> Config::get(const std::string& key) const {
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? parse_double(*v, key) : fallback;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  long long out = 0;
  if (!parse_number(*v, out)) throw ConfigError(key, "expected an integer, got '" + *v + "'");
  return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + *v + "'");
}

std::vector<int> Config::get_int_list(const std::string& key, const std::vector<int>& fallback) const {
  const auto v = get(key);
  return v ? parse_int_list(*v, key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto v = get(key);
  return v ? parse_double_list(*v, key) : fallback;
}

void Config::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (allowed.count(key) == 0) throw ConfigError(key, "unknown setting");
  }
}

}  // namespace besovch
