#pragma once

#include <charconv>
#include <string>

#include "mngu/types.hpp"

namespace mngu {

// Shortest round-trip decimal text for a double. Used everywhere a Scalar is
// written to CSV or JSON so that identical values produce identical bytes.
inline std::string format_scalar(Scalar value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace mngu
