#pragma once

namespace hypersgg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hypersgg
