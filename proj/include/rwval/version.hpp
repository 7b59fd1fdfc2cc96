#pragma once

namespace rwval {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rwval
