#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace lsmdp {

/// A parsed `name:key=value,key=value` descriptor as used on the command line
/// (`onemax:n=10`, `sa:T0=10,rate=0.95`, `hamming:1`). A bare positional
/// argument (`hamming:1`) is stored under the empty key.
class Descriptor {
 public:
  static Descriptor parse(std::string_view text);

  const std::string& name() const { return name_; }
  const std::string& text() const { return text_; }
  bool has(const std::string& key) const { return params_.count(key) != 0; }

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::optional<double> find_double(const std::string& key) const;
  std::optional<std::int64_t> find_int(const std::string& key) const;

  /// Throws ParseError naming the first key not in `allowed`.
  void expect_only(std::initializer_list<std::string_view> allowed) const;

 private:
  std::string text_;
  std::string name_;
  std::map<std::string, std::string> params_;
};

}  // namespace lsmdp
