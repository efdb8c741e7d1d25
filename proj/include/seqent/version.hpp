#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace seqent {

inline constexpr std::string_view kVersion = "0.1.0";

/// 64-bit FNV-1a; stable across platforms, used for config hashes in output headers.
constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_hash(std::uint64_t h);

/// Shortest round-trip text for a double ("%.17g"), locale independent.
std::string format_double(double x);

}  // namespace seqent
