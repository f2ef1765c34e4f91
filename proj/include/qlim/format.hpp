#pragma once

#include <cstdio>
#include <string>

namespace qlim {

// 17 significant digits: lossless round-trip of binary64, deterministic
// byte-for-byte across runs of the same binary.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace qlim
