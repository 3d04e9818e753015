#pragma once

namespace ziegler {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ziegler
