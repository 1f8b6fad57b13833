#pragma once

namespace ntcubic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ntcubic
