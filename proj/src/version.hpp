#pragma once

namespace sqsd {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace sqsd
