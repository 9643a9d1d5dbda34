#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace reviewbounds {

// Shortest decimal text that parses back to the same double.
inline std::string format_real(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace reviewbounds
