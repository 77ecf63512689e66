#pragma once

#define SALEM_VERSION "0.1.0"

namespace salem {
inline constexpr const char* version() { return SALEM_VERSION; }
}  // namespace salem
