#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lsmdp {

/// A candidate solution: an n-bit string stored as the integer whose binary
/// representation it is. Bit 0 is the least significant (rightmost) bit.
using State = std::uint64_t;

/// Time index of a (possibly nonstationary) policy. Starts at 0.
using TimeIndex = std::int64_t;

inline constexpr int kMaxBits = 63;
/// Largest n for exhaustive per-state analyses (2^20 states).
inline constexpr int kMaxExactBits = 20;
/// Largest n for dense 2^n x 2^n transition matrices.
inline constexpr int kMaxDenseBits = 14;

constexpr std::uint64_t state_count(int n) { return std::uint64_t{1} << n; }

/// Renders `x` as an n-character bit string, most significant bit first.
std::string to_bits(State x, int n);

/// Inverse of to_bits. Throws InvalidArgument on characters other than 0/1
/// or strings longer than kMaxBits.
State parse_bits(std::string_view bits);

}  // namespace lsmdp
