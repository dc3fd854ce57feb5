#pragma once

namespace ramen {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ramen
