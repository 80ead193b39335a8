#include "lsmdp/types.hpp"

#include "lsmdp/errors.hpp"

namespace lsmdp {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::string to_bits(State x, int n) {
  std::string bits(static_cast<std::size_t>(n), '0');
  for (int b = 0; b < n; ++b) {
    if ((x >> b) & 1U) bits[static_cast<std::size_t>(n - 1 - b)] = '1';
  }
  return bits;
}

State parse_bits(std::string_view bits) {
  if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxBits)) {
    throw InvalidArgument("bit string must have 1.." + std::to_string(kMaxBits) +
                          " characters: '" + std::string(bits) + "'");
  }
  State x = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw InvalidArgument("not a bit string: '" + std::string(bits) + "'");
    }
    x = (x << 1) | static_cast<State>(c == '1');
  }
  return x;
}

}  // namespace lsmdp
