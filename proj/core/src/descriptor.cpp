#include "lsmdp/descriptor.hpp"

#include <charconv>
#include <cstdlib>

#include "lsmdp/errors.hpp"

namespace lsmdp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Descriptor Descriptor::parse(std::string_view text) {
  Descriptor d;
  d.text_ = std::string(text);
  text = trim(text);
  const auto colon = text.find(':');
  d.name_ = std::string(trim(text.substr(0, colon)));
  if (d.name_.empty()) throw ParseError(0, "empty descriptor '" + d.text_ + "'");
  if (colon == std::string_view::npos) return d;

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) throw ParseError(0, "empty parameter in '" + d.text_ + "'");
    const auto eq = item.find('=');
    std::string key = eq == std::string_view::npos ? std::string{} : std::string(trim(item.substr(0, eq)));
    std::string value(trim(eq == std::string_view::npos ? item : item.substr(eq + 1)));
    if (value.empty()) throw ParseError(0, "missing value in '" + d.text_ + "'");
    if (!d.params_.emplace(key, value).second) {
      throw ParseError(0, "duplicate parameter '" + key + "' in '" + d.text_ + "'");
    }
  }
  return d;
}

std::string Descriptor::get_string(const std::string& key) const {
  const auto it = params_.find(key);
  if (it == params_.end()) {
    throw ParseError(0, "descriptor '" + text_ + "' is missing parameter '" + key + "'");
  }
  return it->second;
}

double Descriptor::get_double(const std::string& key) const {
  const std::string value = get_string(key);
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw ParseError(0, "parameter '" + key + "' of '" + text_ + "' is not a number: " + value);
  }
  return x;
}

std::int64_t Descriptor::get_int(const std::string& key) const {
  const std::string value = get_string(key);
  std::int64_t x = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ParseError(0, "parameter '" + key + "' of '" + text_ + "' is not an integer: " + value);
  }
  return x;
}

std::optional<double> Descriptor::find_double(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

std::optional<std::int64_t> Descriptor::find_int(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_int(key);
}

void Descriptor::expect_only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, value] : params_) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ParseError(0, "unknown parameter '" + (key.empty() ? value : key) + "' in '" +
                              text_ + "'");
    }
  }
}

}  // namespace lsmdp
