#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace tai {

/// 64-bit FNV-1a; stable across platforms, used for golden files and catalogs.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace tai
